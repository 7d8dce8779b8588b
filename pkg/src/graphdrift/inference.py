"""Bayesian logistic regression of Stability on time and code dummies.

The outcome is a deterministic function of the code, so the dummies
quasi-separate it; the Gaussian prior keeps the posterior proper and
every estimate finite. Sampling is random-walk Metropolis initialized
at the MAP with the inverse Hessian as proposal shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .transition import StabilityDataset

FULL_DUMMIES = "full_dummies"
CANONICAL = "canonical"


@dataclass(frozen=True)
class Prior:
    """Independent Gaussian priors, one (mu, sigma) per coefficient."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=np.float64))
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=np.float64))
        if self.mu.shape != self.sigma.shape:
            raise ValueError("mu and sigma must have equal length")
        if np.any(self.sigma <= 0):
            raise ValueError("sigma must be positive")

    @classmethod
    def flat(cls, k: int, sigma: float = 10.0) -> "Prior":
        return cls(np.zeros(k), np.full(k, float(sigma)))


@dataclass(frozen=True)
class DesignMatrix:
    """Regression design: intercept, time, code dummies; code 0 is the reference."""

    x: np.ndarray                  # (n, k)
    labels: tuple[str, ...]
    y: np.ndarray                  # (n,) binary
    times: np.ndarray              # (n,) transition index per row
    warnings: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class MapResult:
    beta: np.ndarray
    converged: bool
    iterations: int
    grad_norm: float


@dataclass(frozen=True)
class SamplerConfig:
    draws: int = 4000
    burn_in: int = 1000
    step_scale: float | None = None   # default 2.38 / sqrt(k), then adapted
    seed: int = 0

    def __post_init__(self):
        if self.draws < 1000:
            raise ValueError("need at least 1000 draws")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")


@dataclass(frozen=True)
class PosteriorDraws:
    draws: np.ndarray              # (S, k)
    acceptance_rate: float
    seed: int
    burn_in: int
    labels: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class CurvePoint:
    t: int
    mean: float
    lower: float
    upper: float
    observed: float


@dataclass(frozen=True)
class StabilityCurve:
    points: tuple[CurvePoint, ...] = field(default=())


def build_design(d: StabilityDataset, encoding: str = CANONICAL,
                 center_time: bool = False) -> DesignMatrix:
    """Turn stability records into a regression design.

    full_dummies: one dummy per distinct observed bit-history (code 0 at
    any horizon is the reference). canonical: a single all-present dummy
    (w = 2^horizon - 1) plus a mixed-history dummy, reference all-absent.
    Records are ordered (t, pair) internally so row order never depends
    on input order.
    """
    if encoding not in (FULL_DUMMIES, CANONICAL):
        raise ValueError(f"unknown encoding {encoding!r}")
    if not d.records:
        raise ValueError("empty stability dataset")
    records = sorted(d.records, key=lambda r: (r.t, r.pair))
    n = len(records)
    times = np.array([r.t for r in records], dtype=np.float64)
    y = np.array([r.y for r in records], dtype=np.float64)
    time_col = times - times.mean() if center_time else times

    columns = [np.ones(n), time_col]
    labels = ["intercept", "time"]
    if encoding == CANONICAL:
        all_present = np.array(
            [1.0 if r.w == (1 << d.horizon_of(r.t)) - 1 else 0.0 for r in records])
        mixed = np.array(
            [1.0 if (r.w != 0 and r.w != (1 << d.horizon_of(r.t)) - 1) else 0.0
             for r in records])
        for col, lab in ((all_present, "all_present"), (mixed, "mixed")):
            if col.any():
                columns.append(col)
                labels.append(lab)
    else:
        seen: dict[str, int] = {}
        for r in records:
            if r.w == 0:
                continue  # reference category
            key = format(r.w, f"0{d.horizon_of(r.t)}b")
            seen.setdefault(key, len(seen))
        for key in sorted(seen, key=lambda k: (len(k), k)):
            col = np.array(
                [1.0 if (r.w != 0 and format(r.w, f"0{d.horizon_of(r.t)}b") == key)
                 else 0.0 for r in records])
            columns.append(col)
            labels.append(f"w_{key}")

    warns = []
    if len({r.w for r in records}) == 1 and np.ptp(times) == 0:
        warns.append("rank deficient: single code value and no time variation")
    return DesignMatrix(x=np.column_stack(columns), labels=tuple(labels), y=y,
                        times=np.array([r.t for r in records]),
                        warnings=tuple(warns))


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    e = np.exp(eta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def log_likelihood(beta: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """Bernoulli log likelihood, computed in log space: sum y*eta - ln(1 + e^eta)."""
    eta = x @ beta
    return float(y @ eta - np.logaddexp(0.0, eta).sum())


def log_prior(beta: np.ndarray, prior: Prior) -> float:
    z = (beta - prior.mu) / prior.sigma
    return float(-0.5 * z @ z - np.sum(np.log(np.sqrt(2.0 * np.pi) * prior.sigma)))


def log_posterior(beta: np.ndarray, x: np.ndarray, y: np.ndarray,
                  prior: Prior) -> float:
    if beta.shape != prior.mu.shape:
        raise ValueError("prior dimension does not match beta")
    return log_likelihood(beta, x, y) + log_prior(beta, prior)


def log_posterior_grad(beta: np.ndarray, x: np.ndarray, y: np.ndarray,
                       prior: Prior) -> np.ndarray:
    p = _sigmoid(x @ beta)
    return x.T @ (y - p) - (beta - prior.mu) / prior.sigma ** 2


def log_posterior_hessian(beta: np.ndarray, x: np.ndarray, y: np.ndarray,
                          prior: Prior) -> np.ndarray:
    p = _sigmoid(x @ beta)
    w = p * (1.0 - p)
    return -(x.T * w) @ x - np.diag(1.0 / prior.sigma ** 2)


def map_estimate(x: np.ndarray, y: np.ndarray, prior: Prior,
                 tol: float = 1e-8, max_iter: int = 100) -> MapResult:
    """Newton ascent on the penalized log posterior with step halving.

    The Gaussian prior bounds the optimum even under complete
    separation, so the Hessian stays negative definite throughout.
    """
    if x.shape[0] < 1:
        raise ValueError("design matrix needs at least one row")
    beta = prior.mu.astype(np.float64).copy()
    lp = log_posterior(beta, x, y, prior)
    grad_norm = np.inf
    for it in range(1, max_iter + 1):
        grad = log_posterior_grad(beta, x, y, prior)
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm < tol:
            return MapResult(beta, True, it - 1, grad_norm)
        hess = log_posterior_hessian(beta, x, y, prior)
        step = np.linalg.solve(-hess, grad)
        # halve only on material descent; near the optimum the objective
        # change is float dust while the gradient still shrinks quadratically
        noise = 1e-10 * (1.0 + abs(lp))
        scale = 1.0
        for _ in range(50):
            cand = beta + scale * step
            cand_lp = log_posterior(cand, x, y, prior)
            if cand_lp >= lp - noise:
                beta, lp = cand, cand_lp
                break
            scale *= 0.5
        else:
            break  # no acceptable step along the Newton direction
    grad_norm = float(np.max(np.abs(log_posterior_grad(beta, x, y, prior))))
    return MapResult(beta, grad_norm < tol, max_iter, grad_norm)


def sample_posterior(x: np.ndarray, y: np.ndarray, prior: Prior,
                     cfg: SamplerConfig,
                     labels: tuple[str, ...] = ()) -> PosteriorDraws:
    """Random-walk Metropolis from the MAP.

    Proposal covariance is the scaled inverse Hessian at the MAP; the
    scale adapts toward a 0.2-0.5 acceptance rate during burn-in and is
    frozen before any retained draw. Deterministic given the seed.
    """
    rng = np.random.default_rng(cfg.seed)
    k = x.shape[1]
    res = map_estimate(x, y, prior)
    hess = log_posterior_hessian(res.beta, x, y, prior)
    cov = np.linalg.inv(-hess)
    cov = 0.5 * (cov + cov.T)
    chol = np.linalg.cholesky(cov + 1e-12 * np.eye(k))
    scale = cfg.step_scale if cfg.step_scale is not None else 2.38 / np.sqrt(k)

    beta = res.beta.copy()
    lp = log_posterior(beta, x, y, prior)

    # adaptation phase: retune the proposal scale in blocks, then freeze
    block, accepted_block = 50, 0
    for step in range(cfg.burn_in):
        beta, lp, acc = _mh_step(rng, beta, lp, scale, chol, x, y, prior)
        accepted_block += acc
        if (step + 1) % block == 0:
            rate = accepted_block / block
            if rate < 0.2:
                scale *= 0.7
            elif rate > 0.5:
                scale *= 1.4
            accepted_block = 0

    draws = np.empty((cfg.draws, k), dtype=np.float64)
    accepted = 0
    for s in range(cfg.draws):
        beta, lp, acc = _mh_step(rng, beta, lp, scale, chol, x, y, prior)
        accepted += acc
        draws[s] = beta
    rate = accepted / cfg.draws
    flags = ()
    if not 0.05 < rate < 0.95:
        flags = (f"acceptance rate {rate:.3f} outside (0.05, 0.95)",)
    return PosteriorDraws(draws=draws, acceptance_rate=rate, seed=cfg.seed,
                          burn_in=cfg.burn_in, labels=tuple(labels), flags=flags)


def _mh_step(rng, beta, lp, scale, chol, x, y, prior):
    proposal = beta + scale * (chol @ rng.standard_normal(beta.shape[0]))
    cand_lp = log_posterior(proposal, x, y, prior)
    if np.log(rng.uniform()) < cand_lp - lp:
        return proposal, cand_lp, 1
    return beta, lp, 0


def posterior_predictive(draws: PosteriorDraws, design: DesignMatrix) -> StabilityCurve:
    """Predicted stability fraction per transition with 95% credible band.

    For each transition the predicted fraction under one draw is the
    mean of per-record success probabilities; the band is the 2.5/97.5
    percentile of that fraction across draws.
    """
    if draws.draws.shape[0] == 0:
        raise ValueError("no posterior draws")
    points = []
    for t in sorted(set(int(v) for v in design.times)):
        rows = design.x[design.times == t]
        obs = float(design.y[design.times == t].mean())
        theta = _sigmoid(draws.draws @ rows.T).mean(axis=1)  # (S,)
        lo, hi = np.percentile(theta, [2.5, 97.5])
        points.append(CurvePoint(t=t, mean=float(theta.mean()),
                                 lower=float(lo), upper=float(hi), observed=obs))
    return StabilityCurve(points=tuple(points))


def coefficient_summary(draws: PosteriorDraws) -> list[dict]:
    """Posterior mean, sd and central 95% interval per coefficient."""
    out = []
    for idx in range(draws.draws.shape[1]):
        col = draws.draws[:, idx]
        lo, hi = np.percentile(col, [2.5, 97.5])
        label = draws.labels[idx] if idx < len(draws.labels) else f"beta_{idx}"
        out.append({"label": label, "mean": float(col.mean()),
                    "sd": float(col.std(ddof=1)), "q025": float(lo),
                    "q975": float(hi)})
    return out
