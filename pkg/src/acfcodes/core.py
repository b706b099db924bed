"""Binary codes as bit-packed columns, and the OR/AND/cover algebra on them.

A column (codeword) of length ``N`` is stored as a Python ``int`` whose bit
``i`` is the entry in row ``i``.  Python ints are packed machine words, so
disjunction, conjunction and the cover test are single big-int operations.

Column indices are 0-based everywhere inside the package.  The text formats
(code files, superset syntax, CLI) are 1-based and convert at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class CodeError(ValueError):
    """Malformed input or an operation applied to incompatible operands."""


class DimensionError(CodeError):
    pass


class ParameterError(CodeError):
    """Parameters outside the domain of an operation (e.g. ``s + l > t``)."""


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed its configured work budget."""

    def __init__(self, message: str, required: int, budget: int):
        super().__init__(message)
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise DimensionError(f"bit vector length must be positive, got {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits do not fit in length {self.length}")

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        """Parse a 0/1 string; character ``i`` is row ``i``."""
        text = text.strip()
        if not text:
            raise CodeError("empty bit string")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise CodeError(f"bad character {ch!r} at position {i + 1} in bit string")
        return cls(len(text), bits)

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "BitVector":
        return cls(length, (1 << length) - 1)

    def weight(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.length))


def _check_same_length(u: BitVector, v: BitVector) -> None:
    if u.length != v.length:
        raise DimensionError(f"length mismatch: {u.length} vs {v.length}")


def disjunction(u: BitVector, v: BitVector) -> BitVector:
    _check_same_length(u, v)
    return BitVector(u.length, u.bits | v.bits)


def conjunction(u: BitVector, v: BitVector) -> BitVector:
    _check_same_length(u, v)
    return BitVector(u.length, u.bits & v.bits)


def covers(v: BitVector, u: BitVector) -> bool:
    """True iff ``v`` covers ``u``, i.e. ``u | v == v``."""
    _check_same_length(u, v)
    return u.bits & ~v.bits == 0


def index_set(indices: Iterable[int], n_cols: int | None = None) -> tuple[int, ...]:
    """Normalize column indices into a sorted, duplicate-free tuple.

    Duplicates are an error rather than silently merged.
    """
    result = tuple(sorted(indices))
    for a, b in zip(result, result[1:]):
        if a == b:
            raise ParameterError(f"duplicate index {a}")
    if result and result[0] < 0:
        raise ParameterError(f"negative index {result[0]}")
    if n_cols is not None and result and result[-1] >= n_cols:
        raise ParameterError(f"index {result[-1]} out of range for {n_cols} columns")
    return result


def to_external(indices: Iterable[int]) -> list[int]:
    return [j + 1 for j in indices]


def from_external(indices: Iterable[int], n_cols: int | None = None) -> tuple[int, ...]:
    return index_set((j - 1 for j in indices), n_cols)


@dataclass(frozen=True)
class BinaryCode:
    """An ``n_rows x n_cols`` binary matrix stored as packed columns."""

    n_rows: int
    n_cols: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise DimensionError(f"code dimensions must be positive, got {self.n_rows}x{self.n_cols}")
        if len(self.columns) != self.n_cols:
            raise DimensionError(f"expected {self.n_cols} columns, got {len(self.columns)}")
        for j, col in enumerate(self.columns):
            if col < 0 or col >> self.n_rows:
                raise DimensionError(f"column {j + 1} does not fit in {self.n_rows} rows")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinaryCode":
        if not rows:
            raise DimensionError("code needs at least one row")
        t = len(rows[0])
        cols = [0] * t
        for i, row in enumerate(rows):
            if len(row) != t:
                raise DimensionError(f"row {i + 1} has {len(row)} entries, expected {t}")
            for j, x in enumerate(row):
                if x:
                    cols[j] |= 1 << i
        return cls(len(rows), t, tuple(cols))

    @classmethod
    def from_columns(cls, n_rows: int, columns: Iterable[BitVector | int]) -> "BinaryCode":
        packed = []
        for col in columns:
            if isinstance(col, BitVector):
                if col.length != n_rows:
                    raise DimensionError(f"column length {col.length}, expected {n_rows}")
                col = col.bits
            packed.append(int(col))
        return cls(n_rows, len(packed), tuple(packed))

    @classmethod
    def identity(cls, n: int) -> "BinaryCode":
        return cls(n, n, tuple(1 << j for j in range(n)))

    @property
    def full_mask(self) -> int:
        return (1 << self.n_rows) - 1

    def column(self, j: int) -> BitVector:
        return BitVector(self.n_rows, self.columns[j])

    def weights(self) -> list[int]:
        return [c.bit_count() for c in self.columns]

    def constant_weight(self) -> int | None:
        """The common column weight ``w`` if ``1 < w < N`` for every column, else None."""
        ws = set(self.weights())
        if len(ws) == 1:
            (w,) = ws
            if 1 < w < self.n_rows:
                return w
        return None

    def rate(self) -> float:
        import math

        return math.log2(self.n_cols) / self.n_rows

    def delete_column(self, j: int) -> "BinaryCode":
        if not 0 <= j < self.n_cols:
            raise ParameterError(f"column index {j} out of range")
        if self.n_cols == 1:
            raise ParameterError("cannot delete the only column")
        cols = self.columns[:j] + self.columns[j + 1:]
        return BinaryCode(self.n_rows, self.n_cols - 1, cols)

    def rows(self) -> list[list[int]]:
        return [[c >> i & 1 for c in self.columns] for i in range(self.n_rows)]


def _check_indices(X: BinaryCode, S: Sequence[int], what: str) -> None:
    if not S:
        raise ParameterError(f"{what} of an empty index set is undefined")
    for j in S:
        if not 0 <= j < X.n_cols:
            raise ParameterError(f"index {j} out of range for {X.n_cols} columns")


def union_mask(X: BinaryCode, S: Iterable[int]) -> int:
    acc = 0
    for j in S:
        acc |= X.columns[j]
    return acc


def conj_mask(X: BinaryCode, L: Iterable[int]) -> int:
    acc = X.full_mask
    for j in L:
        acc &= X.columns[j]
    return acc


def union_of(X: BinaryCode, S: Sequence[int]) -> BitVector:
    _check_indices(X, S, "union")
    return BitVector(X.n_rows, union_mask(X, S))


def conj_of(X: BinaryCode, L: Sequence[int]) -> BitVector:
    _check_indices(X, L, "conjunction")
    return BitVector(X.n_rows, conj_mask(X, L))


def parse_code(text: str) -> BinaryCode:
    """Parse the ``N t`` header followed by ``N`` rows of ``t`` characters."""
    lines = text.splitlines()
    if not lines:
        raise CodeError("line 1: missing 'N t' header")
    header = lines[0].split(" ")
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise CodeError(f"line 1: expected 'N t', got {lines[0]!r}")
    n, t = int(header[0]), int(header[1])
    if n < 1 or t < 1:
        raise CodeError(f"line 1: dimensions must be positive, got {n} {t}")
    body = lines[1:]
    if len(body) < n:
        raise CodeError(f"expected {n} rows after the header, got {len(body)}")
    extra = [ln for ln in body[n:] if ln.strip()]
    if extra:
        raise CodeError(f"line {n + 2}: unexpected content after {n} rows")
    cols = [0] * t
    for i, line in enumerate(body[:n]):
        if len(line) != t:
            raise CodeError(f"line {i + 2}: row {i + 1} has {len(line)} chars, expected {t}")
        for j, ch in enumerate(line):
            if ch == "1":
                cols[j] |= 1 << i
            elif ch != "0":
                raise CodeError(f"line {i + 2}, column {j + 1}: bad character {ch!r}")
    return BinaryCode(n, t, tuple(cols))


def emit_code(X: BinaryCode) -> str:
    out = [f"{X.n_rows} {X.n_cols}"]
    for i in range(X.n_rows):
        out.append("".join("1" if c >> i & 1 else "0" for c in X.columns))
    return "\n".join(out) + "\n"


def read_code(path) -> BinaryCode:
    with open(path, encoding="ascii") as fh:
        return parse_code(fh.read())


def write_code(X: BinaryCode, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(emit_code(X))


WORKED_EXAMPLE_TEXT = """5 5
10011
01110
01101
01011
00111
"""


def worked_example_code() -> BinaryCode:
    """The 5x5 code used as the running worked example (CF (2,2,1/2)-code)."""
    return parse_code(WORKED_EXAMPLE_TEXT)
