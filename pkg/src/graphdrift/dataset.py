"""Loading, typing and windowing of raw tabular data into the N x p x T cube."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

ELEC2_COLUMNS = ("date", "day", "period", "nswprice", "nswdemand",
                 "vicprice", "vicdemand", "transfer", "class")
ELEC2_DEFAULT_SELECTION = ("class", "nswprice", "nswdemand", "vicprice", "vicdemand")

APPENDIX_VARIABLES = ("X", "Y", "Z", "W", "S", "H", "T_var")
APPENDIX_PERIODS = 8


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class VariableSpec:
    """One column of the schema: its name, kind and (for discrete) level labels."""

    name: str
    kind: str                      # 'discrete' | 'continuous'
    levels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("discrete", "continuous"):
            raise ValueError(f"unknown kind {self.kind!r} for {self.name!r}")
        if self.kind == "continuous" and self.levels:
            raise ValueError(f"continuous variable {self.name!r} cannot carry levels")
        if self.kind == "discrete" and self.levels and len(self.levels) < 2:
            raise ValueError(f"discrete variable {self.name!r} needs >= 2 levels")
        object.__setattr__(self, "levels", tuple(self.levels))


def _check_schema(schema) -> None:
    names = [s.name for s in schema]
    if len(set(names)) != len(names):
        raise ValueError("duplicate column names in schema")


@dataclass(frozen=True)
class RawTable:
    """Parsed table: values are floats, discrete cells hold level indices."""

    schema: tuple[VariableSpec, ...]
    values: np.ndarray             # (rows, p) float64

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class WindowedTensor:
    """T equal-length windows of typed observations (the N x p x T cube)."""

    schema: tuple[VariableSpec, ...]
    windows: tuple[np.ndarray, ...]  # each (window_len, p) float64
    window_len: int
    discarded_rows: int = 0

    @property
    def p(self) -> int:
        return len(self.schema)

    @property
    def t(self) -> int:
        return len(self.windows)

    def __post_init__(self):
        if self.t < 2:
            raise DataError("need at least 2 complete windows")
        for w in self.windows:
            if w.shape != (self.window_len, self.p):
                raise DataError("every window must be window_len x p")


@dataclass(frozen=True)
class SimulationConfig:
    """Settings for the 8-period synthetic generator."""

    n_per_period: int = 5000
    seed: int = 0
    period_count: int = APPENDIX_PERIODS

    def __post_init__(self):
        if self.n_per_period < 50:
            raise ValueError("n_per_period must be >= 50")
        if self.period_count != APPENDIX_PERIODS:
            raise ValueError("period_count is fixed at 8")


def load_schema(path: str | Path) -> list[VariableSpec]:
    """Read a JSON schema file: a list of {name, kind, levels?} objects."""
    with open(path, encoding="utf-8") as fh:
        entries = json.load(fh)
    schema = [VariableSpec(e["name"], e["kind"], tuple(e.get("levels", ())))
              for e in entries]
    _check_schema(schema)
    return schema


def load_csv(path: str | Path, schema: list[VariableSpec],
             has_header: bool = True) -> RawTable:
    """Parse a comma-delimited file against a declared schema.

    Discrete levels not pre-declared are collected in first-appearance
    order. Missing values and malformed rows are hard errors reported
    with their row index.
    """
    _check_schema(schema)
    p = len(schema)
    level_maps: list[dict[str, int] | None] = [
        ({lv: k for k, lv in enumerate(s.levels)} if s.kind == "discrete" else None)
        for s in schema
    ]
    pre_declared = [bool(s.levels) for s in schema]
    rows = []
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if has_header and lines:
        lines = lines[1:]
    for idx, line in enumerate(lines):
        if line.strip() == "":
            raise DataError(f"row {idx}: empty line")
        fields = line.split(",")
        if len(fields) != p:
            raise DataError(f"row {idx}: expected {p} fields, got {len(fields)}")
        row = np.empty(p, dtype=np.float64)
        for c, (spec, text) in enumerate(zip(schema, fields)):
            text = text.strip()
            if text == "":
                raise DataError(f"row {idx}: missing value in column {spec.name!r}")
            if spec.kind == "continuous":
                try:
                    row[c] = float(text)
                except ValueError:
                    raise DataError(
                        f"row {idx}: unparseable continuous value {text!r} "
                        f"in column {spec.name!r}") from None
            else:
                lm = level_maps[c]
                if text not in lm:
                    if pre_declared[c]:
                        raise DataError(
                            f"row {idx}: unknown level {text!r} for column {spec.name!r}")
                    lm[text] = len(lm)
                row[c] = lm[text]
        rows.append(row)
    if not rows:
        raise DataError("no records")
    return RawTable(schema=_collected_schema(schema, level_maps),
                    values=np.vstack(rows))


def _collected_schema(schema, level_maps) -> tuple[VariableSpec, ...]:
    out = []
    for c, s in enumerate(schema):
        if s.kind != "discrete":
            out.append(s)
            continue
        levels = tuple(level_maps[c])
        if len(levels) < 2:
            raise DataError(
                f"discrete column {s.name!r} has a single observed level; "
                "a constant discrete variable cannot enter the schema")
        out.append(VariableSpec(s.name, s.kind, levels))
    return tuple(out)


def make_windows(table: RawTable, window_len: int) -> WindowedTensor:
    """Slice the table into T = floor(rows / window_len) windows in record order."""
    if window_len < 2:
        raise ValueError("window_len must be >= 2")
    rows = table.n_rows
    t = rows // window_len
    if t < 2:
        raise DataError(
            f"only {t} complete window(s) of {window_len} rows in {rows} records; need 2")
    discarded = rows - t * window_len
    windows = tuple(
        np.array(table.values[k * window_len:(k + 1) * window_len], copy=True)
        for k in range(t)
    )
    return WindowedTensor(schema=table.schema, windows=windows,
                          window_len=window_len, discarded_rows=discarded)


def elec2_adapter(path: str | Path, selected_columns=ELEC2_DEFAULT_SELECTION,
                  window_len: int = 336, class_column: str = "class",
                  extra_discrete: tuple[str, ...] = (),
                  row_range: tuple[int, int] | None = None) -> WindowedTensor:
    """Window the ELEC2 CSV over a chosen column subset.

    The class column is typed discrete and must be binary; everything
    else is continuous unless listed in extra_discrete. row_range
    selects a half-open [start, stop) slice of the records so either
    the full file or a shorter published slice can be reproduced.
    """
    selected = tuple(selected_columns)
    if len(selected) < 2:
        raise DataError("need >= 2 variables to build a graph")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    header = [h.strip() for h in header]
    missing = [c for c in selected if c not in header]
    if missing:
        raise DataError(f"columns not in file: {missing}")

    def kind_of(col: str) -> str:
        return "discrete" if (col == class_column or col in extra_discrete) else "continuous"

    table = _load_selected_csv(path, header, selected,
                               {c: kind_of(c) for c in selected})
    if row_range is not None:
        start, stop = row_range
        table = RawTable(schema=table.schema, values=table.values[start:stop])
        if table.n_rows == 0:
            raise DataError(f"row_range {row_range} selects no records")
    for spec in table.schema:
        if spec.name == class_column and spec.kind == "discrete" and len(spec.levels) != 2:
            raise DataError(
                f"class column {class_column!r} has {len(spec.levels)} levels, expected 2")
    return make_windows(table, window_len)


def _load_selected_csv(path, header, selected, kinds) -> RawTable:
    """Parse only the selected columns of a headered CSV."""
    col_idx = [header.index(c) for c in selected]
    schema = [VariableSpec(c, kinds[c]) for c in selected]
    level_maps = [({} if kinds[c] == "discrete" else None) for c in selected]
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()[1:]
    rows = np.empty((len(lines), len(selected)), dtype=np.float64)
    for idx, line in enumerate(lines):
        fields = line.split(",")
        if len(fields) != len(header):
            raise DataError(f"row {idx}: expected {len(header)} fields, got {len(fields)}")
        for c, src in enumerate(col_idx):
            text = fields[src].strip()
            if text == "":
                raise DataError(f"row {idx}: missing value in column {selected[c]!r}")
            if level_maps[c] is None:
                try:
                    rows[idx, c] = float(text)
                except ValueError:
                    raise DataError(
                        f"row {idx}: unparseable continuous value {text!r} "
                        f"in column {selected[c]!r}") from None
            else:
                if text not in level_maps[c]:
                    level_maps[c][text] = len(level_maps[c])
                rows[idx, c] = level_maps[c][text]
    if len(lines) == 0:
        raise DataError("no records")
    return RawTable(schema=_collected_schema(schema, level_maps), values=rows)


def simulate_appendix(cfg: SimulationConfig) -> WindowedTensor:
    """Generate the 8-period, 7-variable synthetic tensor.

    Periods 1 and 8 share generating equations, as do 4 and 5; all
    other periods rewire some of the variables. Deterministic given
    the seed.
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_per_period
    windows = tuple(_appendix_window(rng, n, t) for t in range(1, APPENDIX_PERIODS + 1))
    schema = tuple(VariableSpec(name, "continuous") for name in APPENDIX_VARIABLES)
    return WindowedTensor(schema=schema, windows=windows, window_len=n)


def _appendix_window(rng: np.random.Generator, n: int, t: int) -> np.ndarray:
    x = rng.normal(5.0, 100.0, n)
    y = rng.normal(0.0, 3.0, n) + 0.8 * x
    if t in (1, 8):
        z = rng.uniform(0.0, 1.0, n) + 0.2 * y
        w = rng.uniform(0.0, 1.0, n) + 0.5 * x
        s = rng.uniform(1.0, 4.0, n) + 0.89 * z
        h = rng.uniform(1.0, 5000.0, n) + z
        t_var = rng.uniform(0.0, 1.0, n) + 0.5 * h
    elif t in (2, 3):
        z = rng.uniform(1.0, 5000.0, n) + 0.2 * y
        w = rng.uniform(0.0, 1.0, n) + 0.5 * x
        s = rng.uniform(1.0, 4.0, n) + 0.89 * z
        h = rng.uniform(1.0, 5000.0, n) + 0.5 * z
        t_var = rng.uniform(0.0, 1.0, n) + 0.5 * w
    elif t in (4, 5):
        z = rng.uniform(1.0, 5000.0, n) + 0.2 * y
        w = rng.uniform(0.0, 1.0, n) + 0.5 * x
        s = rng.uniform(1.0, 4.0, n) + 0.89 * z
        h = rng.uniform(1.0, 5000.0, n) + 0.5 * z
        t_var = rng.uniform(0.0, 1.0, n) + 0.5 * w + 0.89 * w
    elif t == 6:
        z = rng.uniform(1.0, 5000.0, n) + 0.2 * y
        w = rng.uniform(0.0, 1.0, n) + 0.5 * x
        s = rng.uniform(1.0, 4.0, n) + 0.89 * y
        h = rng.uniform(1.0, 5000.0, n) + 0.5 * y + 0.89 * x
        t_var = rng.uniform(0.0, 1.0, n) + 0.89 * w
    elif t == 7:
        z = rng.uniform(1.0, 5000.0, n) + 0.2 * y
        w = rng.uniform(0.0, 1.0, n) + 0.5 * x
        s = rng.uniform(1.0, 4.0, n) + 0.89 * y
        h = rng.uniform(1.0, 5000.0, n) + 0.5 * y + 0.89 * w
        t_var = rng.uniform(0.0, 1.0, n) + 0.5 * y + 0.89 * x
    else:
        raise ValueError(f"period {t} out of range")
    return np.column_stack([x, y, z, w, s, h, t_var])
