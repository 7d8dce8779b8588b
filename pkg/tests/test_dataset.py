import numpy as np
import pytest

from graphdrift.dataset import (
    DataError,
    RawTable,
    SimulationConfig,
    VariableSpec,
    elec2_adapter,
    load_csv,
    load_schema,
    make_windows,
    simulate_appendix,
)

DC_SCHEMA = [VariableSpec("z", "discrete"), VariableSpec("y", "continuous")]


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestLoadCsv:
    def test_two_row_parse(self, tmp_path):
        p = write(tmp_path, "1,0.5\n0,0.7\n")
        table = load_csv(p, DC_SCHEMA, has_header=False)
        assert table.n_rows == 2
        assert table.schema[0].levels == ("1", "0")  # first-appearance order
        assert table.values[0, 1] == pytest.approx(0.5)
        assert table.values[1, 0] == 1.0  # level index of "0"

    def test_empty_file(self, tmp_path):
        p = write(tmp_path, "")
        with pytest.raises(DataError, match="no records"):
            load_csv(p, DC_SCHEMA, has_header=False)

    def test_malformed_row_reports_index(self, tmp_path):
        p = write(tmp_path, "1,0.5\n0\n")
        with pytest.raises(DataError, match="row 1"):
            load_csv(p, DC_SCHEMA, has_header=False)

    def test_unparseable_continuous(self, tmp_path):
        p = write(tmp_path, "1,abc\n")
        with pytest.raises(DataError, match="unparseable"):
            load_csv(p, DC_SCHEMA, has_header=False)

    def test_unknown_predeclared_level(self, tmp_path):
        schema = [VariableSpec("z", "discrete", ("0", "1")),
                  VariableSpec("y", "continuous")]
        p = write(tmp_path, "2,0.5\n")
        with pytest.raises(DataError, match="unknown level"):
            load_csv(p, schema, has_header=False)

    def test_missing_value_is_hard_error(self, tmp_path):
        p = write(tmp_path, "1,0.5\n0,\n")
        with pytest.raises(DataError, match="missing value"):
            load_csv(p, DC_SCHEMA, has_header=False)

    def test_header_skipped(self, tmp_path):
        p = write(tmp_path, "z,y\n1,0.5\n0,0.7\n")
        table = load_csv(p, DC_SCHEMA, has_header=True)
        assert table.n_rows == 2

    def test_constant_discrete_column_rejected(self, tmp_path):
        p = write(tmp_path, "1,0.5\n1,0.7\n")
        with pytest.raises(DataError, match="single observed level"):
            load_csv(p, DC_SCHEMA, has_header=False)


class TestMakeWindows:
    def table(self, rows):
        vals = np.column_stack([np.arange(rows, dtype=float),
                                np.arange(rows, dtype=float) * 2])
        schema = tuple(VariableSpec(n, "continuous") for n in "ab")
        return RawTable(schema=schema, values=vals)

    def test_floor_and_discard(self):
        tensor = make_windows(self.table(700), 336)
        assert tensor.t == 2
        assert tensor.discarded_rows == 28
        assert tensor.window_len == 336

    def test_single_window_rejected(self):
        with pytest.raises(DataError):
            make_windows(self.table(500), 336)

    def test_order_preserved(self):
        tensor = make_windows(self.table(100), 30)
        stacked = np.vstack(tensor.windows)
        assert np.array_equal(stacked[:, 0], np.arange(90, dtype=float))

    def test_paper_window_count(self):
        tensor = make_windows(self.table(27552), 336)
        assert tensor.t == 82


class TestElec2Adapter:
    def test_default_selection(self, elec2_like_csv):
        tensor = elec2_adapter(elec2_like_csv, window_len=336)
        assert tensor.p == 5
        kinds = {s.name: s.kind for s in tensor.schema}
        assert kinds["class"] == "discrete"
        assert sum(1 for s in tensor.schema if s.kind == "discrete") == 1
        cls = next(s for s in tensor.schema if s.name == "class")
        assert len(cls.levels) == 2

    def test_single_column_rejected(self, elec2_like_csv):
        with pytest.raises(DataError, match=">= 2"):
            elec2_adapter(elec2_like_csv, selected_columns=("class",))

    def test_missing_column(self, elec2_like_csv):
        with pytest.raises(DataError, match="not in file"):
            elec2_adapter(elec2_like_csv, selected_columns=("class", "bogus"))

    def test_all_nine_columns(self, elec2_like_csv):
        tensor = elec2_adapter(
            elec2_like_csv,
            selected_columns=("date", "day", "period", "nswprice", "nswdemand",
                              "vicprice", "vicdemand", "transfer", "class"),
            window_len=200)
        assert tensor.p == 9

    def test_row_range(self, elec2_like_csv):
        full = elec2_adapter(elec2_like_csv, window_len=200)
        sliced = elec2_adapter(elec2_like_csv, window_len=200, row_range=(400, 1400))
        assert sliced.t == 5
        assert np.array_equal(sliced.windows[0], full.windows[2])

    def test_nonbinary_class_rejected(self, tmp_path):
        p = write(tmp_path, "a,class\n1.0,A\n2.0,B\n3.0,C\n4.0,A\n")
        with pytest.raises(DataError, match="levels"):
            elec2_adapter(p, selected_columns=("a", "class"), window_len=2)


class TestSchemaFile:
    def test_load_schema(self, tmp_path):
        p = tmp_path / "schema.json"
        p.write_text('[{"name": "z", "kind": "discrete", "levels": ["a", "b"]},'
                     ' {"name": "y", "kind": "continuous"}]')
        schema = load_schema(p)
        assert schema[0].levels == ("a", "b")
        assert schema[1].kind == "continuous"

    def test_duplicate_names_rejected(self, tmp_path):
        p = tmp_path / "schema.json"
        p.write_text('[{"name": "y", "kind": "continuous"},'
                     ' {"name": "y", "kind": "continuous"}]')
        with pytest.raises(ValueError, match="duplicate"):
            load_schema(p)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            VariableSpec("y", "continuous", ("a",))
        with pytest.raises(ValueError):
            VariableSpec("z", "discrete", ("only",))
        with pytest.raises(ValueError):
            VariableSpec("z", "fuzzy")


class TestSimulator:
    def test_shape(self):
        tensor = simulate_appendix(SimulationConfig(n_per_period=60, seed=1))
        assert tensor.t == 8
        assert tensor.p == 7
        assert all(w.shape == (60, 7) for w in tensor.windows)
        assert all(np.isfinite(w).all() for w in tensor.windows)

    def test_deterministic(self):
        a = simulate_appendix(SimulationConfig(n_per_period=80, seed=9))
        b = simulate_appendix(SimulationConfig(n_per_period=80, seed=9))
        for wa, wb in zip(a.windows, b.windows):
            assert np.array_equal(wa, wb)

    def test_seed_changes_output(self):
        a = simulate_appendix(SimulationConfig(n_per_period=80, seed=9))
        b = simulate_appendix(SimulationConfig(n_per_period=80, seed=10))
        assert not np.array_equal(a.windows[0], b.windows[0])

    def test_min_size_enforced(self):
        with pytest.raises(ValueError):
            SimulationConfig(n_per_period=10, seed=0)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_xy_correlation_dominates_xs(self, seed):
        tensor = simulate_appendix(SimulationConfig(n_per_period=5000, seed=seed))
        for w in tensor.windows:
            cxy = abs(np.corrcoef(w[:, 0], w[:, 1])[0, 1])
            cxs = abs(np.corrcoef(w[:, 0], w[:, 4])[0, 1])
            assert cxy > cxs
