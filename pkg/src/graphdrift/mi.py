"""Penalized mutual-information edge weights for mixed data.

All estimators return weights on the log-likelihood-ratio scale (natural
log), so that values are comparable across pair kinds and AIC/BIC
degree-of-freedom penalties are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

R2_CLAMP = 1.0 - 1e-12


class DegenerateVarianceError(ValueError):
    """A continuous column (or a within-group slice of one) has zero variance."""

    def __init__(self, message: str, pair: tuple[str, str] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class MiConfig:
    """Estimator configuration.

    criterion: 'aic' (penalty 2*df) or 'bic' (penalty ln(N)*df).
    mixed_mode: 'homogeneous' or 'heterogeneous' variance model for
        discrete-continuous pairs.
    fallback_to_homogeneous: when the heterogeneous estimator hits a
        degenerate group (n_i < 2 or zero within-group variance), retry
        the pair homogeneously instead of flagging it. Never silent:
        this is an explicit opt-in.
    """

    criterion: str = "bic"
    mixed_mode: str = "homogeneous"
    fallback_to_homogeneous: bool = False

    def __post_init__(self):
        if self.criterion not in ("aic", "bic"):
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.mixed_mode not in ("homogeneous", "heterogeneous"):
            raise ValueError(f"unknown mixed_mode {self.mixed_mode!r}")


@dataclass(frozen=True)
class EdgeWeight:
    """A single pairwise weight: raw MI, degrees of freedom, penalized value."""

    raw_mi: float
    df: int
    penalized: float
    pair_kind: str  # 'dd', 'dc' or 'cc'
    clamped: bool = False  # |r| ~ 1 guard triggered (cc pairs only)


def penalize(raw_mi: float, df: int, n: int, criterion: str) -> float:
    """Apply the AIC or BIC degrees-of-freedom penalty."""
    if n < 2:
        raise ValueError("penalty needs n >= 2")
    if criterion == "aic":
        return raw_mi - 2.0 * df
    if criterion == "bic":
        return raw_mi - np.log(n) * df
    raise ValueError(f"unknown criterion {criterion!r}")


def _check_lengths(a: np.ndarray, b: np.ndarray) -> int:
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("columns must be 1-d and of equal length")
    return a.shape[0]


def mi_discrete(col_i: np.ndarray, col_j: np.ndarray,
                criterion: str = "bic") -> EdgeWeight:
    """MI between two discrete columns, times N (likelihood-ratio scale).

    Zero-count cells contribute zero. A column with a single observed
    level gives raw_mi = 0 with df = 0.
    """
    n_obs = _check_lengths(col_i, col_j)
    if n_obs < 2:
        raise ValueError("need at least 2 observations")
    zi = np.asarray(col_i, dtype=np.int64)
    zj = np.asarray(col_j, dtype=np.int64)
    levels_i, code_i = np.unique(zi, return_inverse=True)
    levels_j, code_j = np.unique(zj, return_inverse=True)
    li, lj = len(levels_i), len(levels_j)
    counts = np.zeros((li, lj), dtype=np.int64)
    np.add.at(counts, (code_i, code_j), 1)
    f_uv = counts / n_obs
    f_u = f_uv.sum(axis=1, keepdims=True)
    f_v = f_uv.sum(axis=0, keepdims=True)
    nz = f_uv > 0
    terms = f_uv[nz] * np.log(f_uv[nz] / (f_u @ f_v)[nz])
    # summing in sorted order makes the result exactly symmetric in (i, j)
    per_sample = float(np.sort(terms).sum())
    raw = max(per_sample, 0.0) * n_obs
    df = (li - 1) * (lj - 1)
    return EdgeWeight(raw, df, penalize(raw, df, n_obs, criterion), "dd")


def _group_stats(z: np.ndarray, y: np.ndarray):
    """Per-level counts and biased within-group variances of y grouped by z."""
    levels, code = np.unique(np.asarray(z, dtype=np.int64), return_inverse=True)
    counts = np.bincount(code, minlength=len(levels))
    sums = np.bincount(code, weights=y, minlength=len(levels))
    means = sums / counts
    sq = np.bincount(code, weights=(y - means[code]) ** 2, minlength=len(levels))
    return counts, sq / counts


def mi_mixed_homogeneous(z: np.ndarray, y: np.ndarray,
                         criterion: str = "bic",
                         pair: tuple[str, str] | None = None) -> EdgeWeight:
    """Pooled-variance MI between a discrete z and a continuous y.

    raw = (N/2) ln(s0/s) with s0 the grand biased variance of y and
    s the count-weighted pooled within-group variance; df = |levels| - 1.
    """
    n = _check_lengths(np.asarray(z), np.asarray(y))
    y = np.asarray(y, dtype=np.float64)
    s0 = float(np.mean((y - y.mean()) ** 2))
    counts, s_i = _group_stats(z, y)
    s = float(np.sum(counts * s_i) / n)
    if s <= 0.0:
        raise DegenerateVarianceError(
            f"pooled within-group variance is zero for pair {pair}", pair)
    raw = max(0.5 * n * np.log(s0 / s), 0.0)
    df = len(counts) - 1
    return EdgeWeight(raw, df, penalize(raw, df, n, criterion), "dc")


def mi_mixed_heterogeneous(z: np.ndarray, y: np.ndarray,
                           criterion: str = "bic",
                           pair: tuple[str, str] | None = None) -> EdgeWeight:
    """Per-group-variance MI: raw = (N/2) ln(s0) - (1/2) sum n_i ln(s_i).

    Requires every level to hold >= 2 observations with positive
    variance; df = 2(|levels| - 1).
    """
    n = _check_lengths(np.asarray(z), np.asarray(y))
    y = np.asarray(y, dtype=np.float64)
    counts, s_i = _group_stats(z, y)
    if np.any(counts < 2):
        raise DegenerateVarianceError(
            f"a level has fewer than 2 observations for pair {pair}", pair)
    if np.any(s_i <= 0.0):
        raise DegenerateVarianceError(
            f"zero within-group variance for pair {pair}", pair)
    s0 = float(np.mean((y - y.mean()) ** 2))
    if s0 <= 0.0:
        raise DegenerateVarianceError(f"constant continuous column in pair {pair}", pair)
    raw = max(0.5 * n * np.log(s0) - 0.5 * float(np.sum(counts * np.log(s_i))), 0.0)
    df = 2 * (len(counts) - 1)
    return EdgeWeight(raw, df, penalize(raw, df, n, criterion), "dc")


def mi_continuous(y_i: np.ndarray, y_j: np.ndarray,
                  criterion: str = "bic",
                  pair: tuple[str, str] | None = None) -> EdgeWeight:
    """Gaussian MI between two continuous columns: -(N/2) ln(1 - r^2), df = 1.

    Perfect correlation is clamped at r^2 = 1 - 1e-12 and flagged.
    """
    n = _check_lengths(np.asarray(y_i), np.asarray(y_j))
    if n < 3:
        raise ValueError("need at least 3 observations for a correlation")
    a = np.asarray(y_i, dtype=np.float64)
    b = np.asarray(y_j, dtype=np.float64)
    da, db = a - a.mean(), b - b.mean()
    va, vb = float(da @ da), float(db @ db)
    if va <= 0.0 or vb <= 0.0:
        raise DegenerateVarianceError(f"constant continuous column in pair {pair}", pair)
    r2 = float(da @ db) ** 2 / (va * vb)
    clamped = r2 >= R2_CLAMP
    if clamped:
        r2 = R2_CLAMP
    raw = max(-0.5 * n * np.log(1.0 - r2), 0.0)
    return EdgeWeight(raw, 1, penalize(raw, 1, n, criterion), "cc", clamped=clamped)
