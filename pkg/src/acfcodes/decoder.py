"""Nonadaptive superset identification from an outcome vector."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .core import BinaryCode, BitVector, DimensionError, ParameterError, conj_mask, index_set
from .design import DEFAULT_DESIGN_BUDGET, RELAXED, STRICT, Superset, _family, make_superset, outcome_mask

UNIQUE = "unique"
AMBIGUOUS = "not_cf_ambiguous"


def _outcome_bits(X: BinaryCode, r: BitVector | int) -> int:
    if isinstance(r, BitVector):
        if r.length != X.n_rows:
            raise DimensionError(f"outcome has length {r.length}, code has {X.n_rows} rows")
        return r.bits
    return int(r)


def is_acceptable(X: BinaryCode, P, r: BitVector | int, l: int | None = None) -> bool:
    """True iff the conjunction of the columns in ``P`` is covered by ``r``."""
    P = index_set(P, X.n_cols)
    if not P:
        raise ParameterError("acceptable sets are nonempty")
    if l is not None and len(P) > l:
        raise ParameterError(f"|P| = {len(P)} exceeds l = {l}")
    return conj_mask(X, P) & ~_outcome_bits(X, r) == 0


def minimal_acceptable_sets(X: BinaryCode, r: BitVector | int, l: int) -> tuple[list[tuple[int, ...]], int]:
    """All minimal acceptable sets of size <= l, and the number of sets tested.

    Sizes are visited in ascending order; a candidate containing an already
    found minimal set is skipped without being tested.
    """
    if l < 1:
        raise ParameterError("l must be positive")
    bits = _outcome_bits(X, r)
    found: list[tuple[int, ...]] = []
    found_masks: list[int] = []
    checked = 0
    for size in range(1, min(l, X.n_cols) + 1):
        new = []
        for P in combinations(range(X.n_cols), size):
            pm = 0
            for j in P:
                pm |= 1 << j
            if any(fm & pm == fm for fm in found_masks):
                continue
            checked += 1
            if conj_mask(X, P) & ~bits == 0:
                new.append((P, pm))
        for P, pm in new:
            found.append(P)
            found_masks.append(pm)
    return found, checked


@dataclass
class DecodeResult:
    decoded: Superset | None
    acceptable_checked: int
    status: str
    minimal_sets: list[tuple[int, ...]]
    preimages: list[Superset] | None = None

    def to_dict(self) -> dict:
        d = {
            "status": self.status,
            "decoded": self.decoded.to_external() if self.decoded is not None else None,
            "minimal_acceptable_sets": [[j + 1 for j in P] for P in self.minimal_sets],
            "acceptable_checked": self.acceptable_checked,
        }
        if self.preimages is not None:
            d["preimages"] = [p.to_external() for p in self.preimages]
        return d


def work_bound(t: int, l: int) -> int:
    return sum(comb(t, i) for i in range(1, l + 1))


def decode(X: BinaryCode, r: BitVector | int, s: int, l: int, exhaustive_check: bool = False,
           model: str = RELAXED, budget: int = DEFAULT_DESIGN_BUDGET) -> DecodeResult:
    """Decode the positive superset as the family of minimal acceptable sets.

    The answer is re-encoded and compared with ``r``; it is reported as
    ``unique`` only if it reproduces ``r`` with at most ``s`` parts.  That
    check cannot see a second preimage on a non-CF code; ``exhaustive_check``
    additionally requires ``r`` to have exactly one preimage in the ``model``
    family, and that it equals the decoded superset.
    """
    if s < 1:
        raise ParameterError("s must be positive")
    bits = _outcome_bits(X, r)
    sets, checked = minimal_acceptable_sets(X, bits, l)
    result = DecodeResult(None, checked, AMBIGUOUS, sets)
    if sets and len(sets) <= s and outcome_mask(X, sets) == bits:
        result = DecodeResult(make_superset(sets, RELAXED), checked, UNIQUE, sets)
    if exhaustive_check:
        pre = decode_exhaustive(X, bits, s, l, model, budget)
        result.preimages = pre
        if result.status == UNIQUE and not (len(pre) == 1 and pre[0].parts == result.decoded.parts):
            result.status = AMBIGUOUS
    return result


def decode_exhaustive(
    X: BinaryCode,
    r: BitVector | int,
    s: int,
    l: int,
    model: str = RELAXED,
    budget: int = DEFAULT_DESIGN_BUDGET,
) -> list[Superset]:
    """Every superset of the given family whose outcome equals ``r``."""
    bits = _outcome_bits(X, r)
    return [p for p in _family(X.n_cols, s, l, model, budget) if outcome_mask(X, p.parts) == bits]


__all__ = [
    "AMBIGUOUS",
    "UNIQUE",
    "DecodeResult",
    "decode",
    "decode_exhaustive",
    "is_acceptable",
    "minimal_acceptable_sets",
    "work_bound",
    "STRICT",
    "RELAXED",
]
