import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import FNV1A_64_VECTORS, fnv1a64_masked
from pudetect.dataprep import (
    MISSING,
    DataFormatError,
    PreparedDataset,
    PreprocessSpec,
    RawTable,
    clamp_extremes,
    coerce_cell,
    coerce_numeric,
    derive_labels,
    find_first_csv,
    hash_categorical,
    load_raw_csv,
    parse_raw_csv,
    prepare,
    prepare_table,
    replace_missing,
)

DATA = Path(__file__).parent / "data"
SPEC = PreprocessSpec()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_bytes(text.encode("utf-8"))
    return p


class TestLoadRawCsv:
    def test_every_line_is_a_row(self, tmp_path):
        t = load_raw_csv(write(tmp_path, "a.csv", "1,2,Benign\n3,,Attack"))
        assert (t.n_rows, t.n_cols) == (2, 3)
        assert t.cells[1][1] == ""

    def test_first_row_is_not_a_header(self, tmp_path):
        t = load_raw_csv(write(tmp_path, "a.csv", "f1,f2,label\n1,2,Benign\n"))
        assert t.cells[0] == ("f1", "f2", "label")

    def test_empty_file(self, tmp_path):
        with pytest.raises(DataFormatError, match="zero rows"):
            load_raw_csv(write(tmp_path, "a.csv", ""))

    def test_ragged_rows_name_the_line(self, tmp_path):
        with pytest.raises(DataFormatError, match="line 3"):
            load_raw_csv(write(tmp_path, "a.csv", "1,2,x\n1,2,x\n1,x\n"))

    def test_crlf(self, tmp_path):
        t = load_raw_csv(write(tmp_path, "a.csv", "1,2,Benign\r\n3,4,Attack\r\n"))
        assert t.cells == (("1", "2", "Benign"), ("3", "4", "Attack"))

    def test_quotes_are_ordinary(self):
        t = parse_raw_csv('"a,b",c\n')
        assert t.cells[0] == ('"a', 'b"', "c")

    def test_single_column_rejected(self):
        with pytest.raises(DataFormatError):
            parse_raw_csv("1\n2\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_raw_csv(tmp_path / "nope.csv")

    def test_golden_shape_matches_line_splitter(self):
        path = DATA / "golden_raw.csv"
        t = load_raw_csv(path)
        lines = path.read_text().strip("\n").split("\n")
        assert t.n_rows == len(lines) == 6
        assert t.n_cols == len(lines[0].split(",")) == 5
        assert [list(r) for r in t.cells] == [ln.split(",") for ln in lines]


class TestDeriveLabels:
    def test_benign_is_one(self):
        t = RawTable.from_rows([["1", "Benign"], ["2", "HTTP-Flood"], ["3", "Benign"]])
        rest, y = derive_labels(t, SPEC)
        assert y.tolist() == [1, 0, 1]
        assert rest.n_cols == 1

    def test_all_benign(self):
        t = RawTable.from_rows([["1", "Benign"]] * 4)
        assert derive_labels(t, SPEC)[1].tolist() == [1] * 4

    def test_exact_case_sensitive_match(self):
        t = RawTable.from_rows([["1", "benign"]])
        assert derive_labels(t, SPEC)[1].tolist() == [0]

    def test_label_column_choice(self):
        t = RawTable.from_rows([["Benign", "7", "x"], ["DoS", "8", "y"]])
        rest, y = derive_labels(t, PreprocessSpec(label_column=0))
        assert y.tolist() == [1, 0]
        assert rest.cells == (("7", "x"), ("8", "y"))

    def test_label_column_out_of_range(self):
        t = RawTable.from_rows([["1", "Benign"]])
        with pytest.raises(ValueError):
            derive_labels(t, PreprocessSpec(label_column=2))


class TestReplaceMissing:
    def test_empty_cells(self):
        t = replace_missing(RawTable.from_rows([["5", "", "x"]]))
        assert t.cells[0] == ("5", MISSING, "x")

    def test_all_empty_row(self):
        t = replace_missing(RawTable.from_rows([["", "", ""]]))
        assert t.cells[0] == (MISSING,) * 3

    def test_whitespace_is_not_missing(self):
        t = replace_missing(load_raw_csv(DATA / "golden_raw.csv"))
        assert t.cells[3][1] == " "


class TestHashing:
    @pytest.mark.parametrize("text,expected", sorted(FNV1A_64_VECTORS.items()))
    def test_published_vectors(self, text, expected):
        assert hash_categorical(text) == expected & 0x7FFF_FFFF_FFFF_FFFF

    def test_empty_string_is_masked_offset_basis(self):
        assert hash_categorical("") == 0x4BF29CE484222325

    def test_tcp_against_oracle(self):
        assert hash_categorical("tcp") == fnv1a64_masked("tcp")

    @given(st.text())
    def test_matches_oracle_and_is_deterministic(self, s):
        h = hash_categorical(s)
        assert h == hash_categorical(s) == fnv1a64_masked(s)
        assert 0 <= h < 2**63


class TestClampAndCoerce:
    def test_below_threshold(self):
        assert clamp_extremes(42, SPEC) == 42

    def test_above_threshold_hashes_decimal_text(self):
        v = -(10**15) - 1
        assert clamp_extremes(v, SPEC) == fnv1a64_masked("-1000000000000001")

    def test_threshold_is_strict(self):
        assert clamp_extremes(10**15, SPEC) == 10**15
        assert clamp_extremes(-(10**15), SPEC) == -(10**15)

    @pytest.mark.parametrize("cell,expected", [
        ("7", 7), ("3.9", 3), ("-3.9", -3), ("+12", 12), ("1e3", 1000),
        (".5", 0), ("-0.0", 0),
    ])
    def test_numeric_cells(self, cell, expected):
        assert coerce_cell(cell, SPEC) == expected

    def test_missing_uses_fill_value(self):
        assert coerce_cell(MISSING, SPEC) == 0
        assert coerce_cell(MISSING, PreprocessSpec(fill_value=-1)) == -1

    @pytest.mark.parametrize("cell", ["udp-flood", " 7", "nan", "inf", "0x10", "1,5"])
    def test_text_is_hashed(self, cell):
        assert coerce_cell(cell, SPEC) == fnv1a64_masked(cell)

    def test_hashed_text_is_not_clamped(self):
        h = coerce_cell("udp-flood", SPEC)
        assert h > SPEC.extreme_threshold
        assert h == hash_categorical("udp-flood")

    def test_huge_exponent_stays_total(self):
        assert coerce_cell("1e999999", SPEC) == fnv1a64_masked("1e999999")

    @settings(max_examples=300)
    @given(st.text())
    def test_totality(self, cell):
        v = coerce_cell(cell, SPEC)
        assert -(2**63) <= v < 2**63

    def test_matrix_dtype(self):
        t = replace_missing(RawTable.from_rows([["1", ""], ["x", "2.5"]]))
        m = coerce_numeric(t, SPEC)
        assert m.dtype == np.int64
        assert m.tolist() == [[1, 0], [fnv1a64_masked("x"), 2]]

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            PreprocessSpec(extreme_threshold=0)
        with pytest.raises(ValueError):
            PreprocessSpec(fill_value=2**63)


class TestPrepare:
    def test_golden_fixture_bytes(self):
        out = prepare(DATA / "golden_raw.csv").to_csv().encode("utf-8")
        assert out == (DATA / "golden_prepared.csv").read_bytes()

    def test_golden_cells_against_oracle(self):
        ds = prepare(DATA / "golden_raw.csv")
        assert ds.y.tolist() == [1, 0, 1, 0, 1, 0]
        assert ds.x[0].tolist() == [6, fnv1a64_masked("tcp"), 3, 0]
        assert ds.x[1, 3] == fnv1a64_masked("1000000000000001")
        assert ds.x[2, 0] == 0  # empty cell
        assert ds.x[3, 1] == fnv1a64_masked(" ")
        assert ds.x[4, 3] == 10**15
        assert ds.x[5, 0] == fnv1a64_masked("123456789012345678901")
        assert ds.feature_count == 4

    def test_no_positives_is_allowed(self, tmp_path):
        ds = prepare(write(tmp_path, "a.csv", "1,DoS\n2,DoS\n"))
        assert ds.y.tolist() == [0, 0]

    def test_invariants(self):
        ds = prepare(DATA / "golden_raw.csv")
        assert ds.x.dtype == np.int64
        assert set(ds.y.tolist()) <= {0, 1}

    def test_prepared_dataset_validation(self):
        with pytest.raises(ValueError):
            PreparedDataset(np.zeros((2, 2)), np.zeros(2, dtype=np.int64))
        with pytest.raises(ValueError):
            PreparedDataset(np.zeros((2, 2), dtype=np.int64), np.array([0, 2]))


cell_text = st.one_of(
    st.integers(-(10**18), 10**18).map(str),
    st.decimals(allow_nan=False, allow_infinity=False, places=3).map(str),
    st.text(alphabet=st.characters(blacklist_characters=",\r\n", blacklist_categories=("Cs",)), max_size=6),
)


@st.composite
def raw_tables(draw):
    n_rows = draw(st.integers(1, 6))
    n_feat = draw(st.integers(1, 4))
    rows = [[draw(cell_text) for _ in range(n_feat)] + [draw(st.sampled_from(["Benign", "DoS", "benign", ""]))]
            for _ in range(n_rows)]
    return RawTable.from_rows(rows)


def render(table: RawTable) -> str:
    return "".join(",".join(r) + "\n" for r in table.cells)


class TestProperties:
    @given(raw_tables())
    def test_determinism(self, table):
        a = prepare_table(parse_raw_csv(render(table)))
        b = prepare_table(parse_raw_csv(render(table)))
        assert a.to_csv().encode() == b.to_csv().encode()

    @given(raw_tables())
    def test_label_mapping_count(self, table):
        ds = prepare_table(table)
        assert int(ds.y.sum()) == sum(r[-1] == "Benign" for r in table.cells)
        assert ds.feature_count == table.n_cols - 1

    @given(raw_tables())
    def test_idempotent_when_values_are_in_range(self, table):
        ds = prepare_table(table)
        relabel = ["Benign" if v else "DoS" for v in ds.y.tolist()]
        rerendered = "".join(
            ",".join(map(str, row)) + f",{lab}\n" for row, lab in zip(ds.x.tolist(), relabel)
        )
        again = prepare_table(parse_raw_csv(rerendered))
        in_range = np.abs(ds.x) <= SPEC.extreme_threshold
        assert np.array_equal(again.y, ds.y)
        assert np.array_equal(again.x[in_range], ds.x[in_range])

    def test_idempotent_on_numeric_fixture(self, tmp_path):
        p = write(tmp_path, "a.csv", "1,-2,3.7,Benign\n,5,6,DoS\n")
        first = prepare(p)
        rel = "".join(",".join(map(str, r)) + ("," + ("Benign" if y else "DoS")) + "\n"
                      for r, y in zip(first.x.tolist(), first.y.tolist()))
        second = prepare(write(tmp_path, "b.csv", rel))
        assert second.to_csv() == first.to_csv()


class TestFindFirstCsv:
    def test_lexicographic(self, tmp_path):
        for name in ("b.csv", "a.csv", "z.txt"):
            (tmp_path / name).write_text("1,x\n")
        found = find_first_csv(tmp_path)
        expected = sorted(n for n in os.listdir(tmp_path) if n.endswith(".csv"))[0]
        assert found == tmp_path / expected == tmp_path / "a.csv"

    def test_extension_case_insensitive_and_byte_order(self, tmp_path):
        for name in ("b.CSV", "a.txt", "B.csv"):
            (tmp_path / name).write_text("1,x\n")
        assert find_first_csv(tmp_path) == tmp_path / "B.csv"

    def test_directories_ignored(self, tmp_path):
        (tmp_path / "a.csv").mkdir()
        assert find_first_csv(tmp_path) is None

    def test_no_csv(self, tmp_path):
        (tmp_path / "notes.txt").write_text("x")
        assert find_first_csv(tmp_path) is None

    def test_empty_dir(self, tmp_path):
        assert find_first_csv(tmp_path) is None

    def test_missing_dir(self, tmp_path):
        with pytest.raises(OSError):
            find_first_csv(tmp_path / "nope")
