import pytest
from hypothesis import given
from hypothesis import strategies as st

from acfcodes.core import (
    BinaryCode,
    BitVector,
    CodeError,
    DimensionError,
    ParameterError,
    WORKED_EXAMPLE_TEXT,
    conj_of,
    conjunction,
    covers,
    disjunction,
    emit_code,
    from_external,
    index_set,
    parse_code,
    read_code,
    union_of,
    write_code,
)
from conftest import codes

bv = BitVector.from_string


def test_disjunction_of_columns_4_and_5(ex1):
    assert str(disjunction(ex1.column(3), ex1.column(4))) == "11111"
    assert str(disjunction(bv("11011"), bv("10111"))) == "11111"


def test_conjunction_of_columns_2_and_3(ex1):
    assert str(conjunction(bv("01110"), bv("01101"))) == "01100"
    assert str(conj_of(ex1, (1, 2))) == "01100"


def test_cover_fails_for_s12_l45(ex1):
    u = union_of(ex1, (0, 1))
    c = conj_of(ex1, (3, 4))
    assert str(u) == "11110"
    assert str(c) == "10011"
    assert not covers(u, c)


def test_union_of_45_is_all_ones(ex1):
    assert union_of(ex1, (3, 4)) == BitVector.ones(5)


def test_example_columns(ex1):
    assert [str(ex1.column(j)) for j in range(5)] == ["10000", "01110", "01101", "11011", "10111"]


def test_length_mismatch():
    with pytest.raises(DimensionError):
        disjunction(bv("101"), bv("10"))
    with pytest.raises(DimensionError):
        covers(bv("1"), bv("10"))


def test_empty_folds_rejected(ex1):
    with pytest.raises(ParameterError):
        union_of(ex1, ())
    with pytest.raises(ParameterError):
        conj_of(ex1, ())


def test_index_set_rules():
    assert index_set([3, 1, 2]) == (1, 2, 3)
    assert from_external([1, 5], 5) == (0, 4)
    with pytest.raises(ParameterError):
        index_set([1, 1])
    with pytest.raises(ParameterError):
        from_external([6], 5)
    with pytest.raises(ParameterError):
        from_external([0], 5)


def test_parse_example():
    X = parse_code(WORKED_EXAMPLE_TEXT)
    assert (X.n_rows, X.n_cols) == (5, 5)
    assert X.rows()[0] == [1, 0, 0, 1, 1]


@pytest.mark.parametrize(
    "text, where",
    [
        ("", "line 1"),
        ("5\n", "line 1"),
        ("2 2\n10\n", "expected 2 rows"),
        ("2 2\n10\n1x\n", "line 3, column 2"),
        ("2 2\n10\n101\n", "line 3"),
        ("1 2\n10\n11\n", "line 3"),
    ],
)
def test_parse_errors_name_the_location(text, where):
    with pytest.raises(CodeError, match=where):
        parse_code(text)


def test_file_roundtrip(tmp_path, ex1):
    p = tmp_path / "x.cf"
    write_code(ex1, p)
    assert p.read_text() == WORKED_EXAMPLE_TEXT
    assert read_code(p) == ex1


def test_code_validation():
    with pytest.raises(DimensionError):
        BinaryCode(2, 1, (4,))
    with pytest.raises(DimensionError):
        BinaryCode.from_rows([[1, 0], [1]])
    X = BinaryCode.from_rows([[1, 0, 1], [0, 1, 1]])
    assert X.columns == (1, 2, 3)
    assert X.delete_column(1).columns == (1, 3)
    assert BinaryCode.identity(3).weights() == [1, 1, 1]


def test_constant_weight():
    assert BinaryCode(4, 2, (0b0011, 0b1100)).constant_weight() == 2
    assert BinaryCode(4, 2, (0b0011, 0b1110)).constant_weight() is None


@given(codes())
def test_emit_parse_roundtrip(X):
    assert parse_code(emit_code(X)) == X


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1))))
def test_cover_is_or_identity(args):
    n, a, b = args
    u, v = BitVector(n, a), BitVector(n, b)
    assert covers(v, u) == (disjunction(u, v) == v)
    assert covers(disjunction(u, v), u)
    assert covers(u, conjunction(u, v))
    assert str(BitVector.from_string(str(u))) == str(u)
