"""Transition-matrix process: bit-histories of edges and the Stability variable.

Each potential edge's presence/absence across windows is folded into an
integer code (most significant bit = earliest window). Python integers
are arbitrary precision, so codes are exact at every horizon; the
all-zero / all-one stability test needs no width guard.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .forest import AdjacencyMatrix

CUMULATIVE = "cumulative"
CONSECUTIVE = "consecutive"


@dataclass(frozen=True)
class TransitionMatrix:
    """Symmetric matrix of edge-history codes after `horizon` folded periods."""

    v: int
    codes: np.ndarray              # (v, v) object array of Python ints
    horizon: int

    def code(self, i: int, j: int) -> int:
        return int(self.codes[i, j])


@dataclass(frozen=True)
class StabilityRecord:
    """One (pair, transition) observation feeding the logistic model."""

    pair: tuple[int, int]          # i < j
    t: int                         # transition index, 2..T
    w: int                         # history code at this record's horizon
    y: int                         # stability indicator


@dataclass(frozen=True)
class StabilityDataset:
    """Flattened stability records, transition-major, pairs lexicographic."""

    records: tuple[StabilityRecord, ...]
    mode: str                      # CUMULATIVE | CONSECUTIVE
    v: int

    @property
    def n_pairs(self) -> int:
        return self.v * (self.v - 1) // 2

    @property
    def transitions(self) -> tuple[int, ...]:
        return tuple(sorted({r.t for r in self.records}))

    def horizon_of(self, t: int) -> int:
        """Bit length of codes recorded at transition t."""
        return t if self.mode == CUMULATIVE else 2

    def to_csv(self, path) -> None:
        """Write records with the code as a bit string (width-safe)."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("pair_i,pair_j,t,w,y\n")
            for r in self.records:
                bits = format(r.w, f"0{self.horizon_of(r.t)}b")
                fh.write(f"{r.pair[0]},{r.pair[1]},{r.t},{bits},{r.y}\n")


def fold_transition(ams: list[AdjacencyMatrix]) -> list[TransitionMatrix]:
    """Fold adjacency matrices into one TransitionMatrix per horizon t = 2..T.

    Satisfies the recursion TM_t = 2 * TM_{t-1} + AM_t elementwise, with
    the horizon-1 matrix equal to AM_1.
    """
    if len(ams) < 2:
        raise ValueError("need at least 2 adjacency matrices")
    v = ams[0].v
    for am in ams:
        if am.v != v:
            raise ValueError("adjacency matrices disagree in dimension")
    codes = np.array(ams[0].bits, dtype=object)
    out = []
    for horizon, am in enumerate(ams[1:], start=2):
        codes = 2 * codes + np.array(am.bits, dtype=object)
        out.append(TransitionMatrix(v=v, codes=codes.copy(), horizon=horizon))
    return out


def decode_bits(w: int, t: int) -> tuple[int, ...]:
    """Big-endian bit expansion of a code; inverse of the fold."""
    if w < 0 or w >= (1 << t):
        raise ValueError(f"code {w} out of range for horizon {t}")
    return tuple((w >> (t - 1 - k)) & 1 for k in range(t))


def fold_bits(bits) -> int:
    """Fold a bit sequence back into its integer code (oracle inverse)."""
    code = 0
    for b in bits:
        code = 2 * code + int(b)
    return code


def stability_indicator(w: int, t: int) -> int:
    """1 when the history is all-absent (w = 0) or all-present (w = 2^t - 1)."""
    if w < 0 or w >= (1 << t):
        raise ValueError(f"code {w} out of range for horizon {t}")
    return 1 if (w == 0 or w == (1 << t) - 1) else 0


def build_stability_dataset(ams: list[AdjacencyMatrix],
                            mode: str = CUMULATIVE) -> StabilityDataset:
    """Assemble the flattened (pair, t, w, y) records.

    Cumulative mode folds the full history from window 1; consecutive
    mode compares only adjacent windows, so codes live in {0,1,2,3} and
    the stability test uses horizon 2 at every transition.
    """
    if mode not in (CUMULATIVE, CONSECUTIVE):
        raise ValueError(f"unknown mode {mode!r}")
    if len(ams) < 2:
        raise ValueError("need at least 2 adjacency matrices")
    v = ams[0].v
    pairs = list(itertools.combinations(range(v), 2))
    records = []
    if mode == CUMULATIVE:
        for tm in fold_transition(ams):
            for i, j in pairs:
                w = tm.code(i, j)
                records.append(StabilityRecord(
                    (i, j), tm.horizon, w, stability_indicator(w, tm.horizon)))
    else:
        for t in range(2, len(ams) + 1):
            prev, cur = ams[t - 2], ams[t - 1]
            for i, j in pairs:
                w = 2 * int(prev.bits[i, j]) + int(cur.bits[i, j])
                records.append(StabilityRecord((i, j), t, w, stability_indicator(w, 2)))
    return StabilityDataset(records=tuple(records), mode=mode, v=v)


def stability_fraction(d: StabilityDataset, t: int) -> float:
    """Share of stable pairs at transition t: mu_t over the pair count."""
    ys = [r.y for r in d.records if r.t == t]
    if not ys:
        raise ValueError(f"no records at transition {t}")
    return float(sum(ys)) / d.n_pairs


def stability_fractions(d: StabilityDataset) -> dict[int, float]:
    """Fractions for every transition, ascending."""
    return {t: stability_fraction(d, t) for t in d.transitions}
