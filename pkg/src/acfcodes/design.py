"""Supersets (complexes), outcome vectors, and CF design verification."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .combinatorics import strict_superset_count
from .core import (
    BinaryCode,
    BitVector,
    BudgetExceeded,
    CodeError,
    ParameterError,
    conj_mask,
    index_set,
)
from .cover import analyze, is_cf_code

DEFAULT_DESIGN_BUDGET = 10**7
DEFAULT_CAP = 10**5

STRICT = "strict"
RELAXED = "relaxed"


@dataclass(frozen=True)
class Superset:
    """An unordered family of index sets, stored in canonical (sorted) order.

    ``strict``: pairwise disjoint parts of equal size.
    ``relaxed``: an antichain of parts (no part contains another).
    """

    parts: tuple[tuple[int, ...], ...]
    model: str = RELAXED

    def __post_init__(self):
        if self.model not in (STRICT, RELAXED):
            raise ParameterError(f"unknown model {self.model!r}")
        if not self.parts:
            raise ParameterError("a superset needs at least one part")
        if any(not P for P in self.parts):
            raise ParameterError("superset parts must be nonempty")
        if list(self.parts) != sorted(self.parts):
            raise ParameterError("superset parts are not in canonical order; use make_superset")
        if self.model == STRICT:
            sizes = {len(P) for P in self.parts}
            if len(sizes) != 1:
                raise ParameterError("strict superset parts must all have the same size")
            seen: set[int] = set()
            for P in self.parts:
                if seen & set(P):
                    raise ParameterError("strict superset parts must be pairwise disjoint")
                seen |= set(P)
        else:
            sets = [set(P) for P in self.parts]
            for i, a in enumerate(sets):
                for j, b in enumerate(sets):
                    if i != j and a <= b:
                        raise ParameterError(f"part {sorted(a)} is contained in part {sorted(b)}")

    @property
    def k(self) -> int:
        return len(self.parts)

    def indices(self) -> set[int]:
        return {j for P in self.parts for j in P}

    def to_external(self) -> list[list[int]]:
        return [[j + 1 for j in P] for P in self.parts]

    def __str__(self) -> str:
        return format_superset(self)


def make_superset(parts: Sequence[Sequence[int]], model: str = RELAXED, n_cols: int | None = None) -> Superset:
    return Superset(tuple(sorted(index_set(P, n_cols) for P in parts)), model)


_PART_RE = re.compile(r"^\{\s*\d+(\s*,\s*\d+)*\s*\}$")


def parse_superset(text: str, model: str = RELAXED, n_cols: int | None = None) -> Superset:
    """Parse the 1-based syntax ``{1,4}|{2,3}``."""
    parts = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if not _PART_RE.match(chunk):
            raise CodeError(f"bad superset part {chunk!r}; expected e.g. {{1,4}}")
        nums = [int(x) for x in chunk[1:-1].split(",")]
        if min(nums) < 1:
            raise CodeError("superset indices are 1-based")
        parts.append([x - 1 for x in nums])
    return make_superset(parts, model, n_cols)


def format_superset(p: Superset) -> str:
    return "|".join("{" + ",".join(str(j + 1) for j in P) + "}" for P in p.parts)


def outcome_mask(X: BinaryCode, parts) -> int:
    r = 0
    for P in parts:
        r |= conj_mask(X, P)
    return r


def outcome(X: BinaryCode, p: Superset | Sequence[Sequence[int]]) -> BitVector:
    """Test outcomes: OR over parts of the AND of each part's columns."""
    parts = p.parts if isinstance(p, Superset) else [tuple(P) for P in p]
    if not parts:
        raise ParameterError("outcome of an empty superset")
    for P in parts:
        if not P:
            raise ParameterError("outcome of an empty part")
        for j in P:
            if not 0 <= j < X.n_cols:
                raise ParameterError(f"index {j} out of range for {X.n_cols} columns")
    return BitVector(X.n_rows, outcome_mask(X, parts))


def count_strict(t: int, s: int, l: int) -> int:
    return strict_superset_count(t, s, l)


def enumerate_strict(t: int, s: int, l: int) -> Iterator[Superset]:
    """All families of ``s`` disjoint ``l``-subsets of range(t), each once.

    Parts are chosen in increasing order of their minimum element.
    """
    if s < 1 or l < 1:
        raise ParameterError("s and l must be positive")
    if s * l > t:
        raise ParameterError(f"need s*l <= t, got s={s}, l={l}, t={t}")

    def rec(parts: list[tuple[int, ...]], used: set[int], min_floor: int):
        if len(parts) == s:
            yield Superset(tuple(parts), STRICT)
            return
        need_after = (s - len(parts) - 1) * l
        for m in range(min_floor, t):
            if m in used:
                continue
            free = [j for j in range(m + 1, t) if j not in used]
            if len(free) - need_after < l - 1:
                break
            for rest in combinations(free, l - 1):
                P = (m,) + rest
                parts.append(P)
                used.update(P)
                yield from rec(parts, used, m + 1)
                used.difference_update(P)
                parts.pop()

    yield from rec([], set(), 0)


def relaxed_candidates(t: int, l: int) -> list[tuple[int, ...]]:
    """Candidate parts of size 1..l in size-then-lex order."""
    return [P for size in range(1, l + 1) for P in combinations(range(t), size)]


def relaxed_count_upper(t: int, s: int, l: int) -> int:
    m = sum(comb(t, i) for i in range(1, l + 1))
    return sum(comb(m, k) for k in range(1, s + 1))


def relaxed_count_lower(t: int, s: int, l: int) -> int:
    """The lower bound C(C(t,l), s) on the relaxed family size."""
    return comb(comb(t, l), s)


def enumerate_relaxed(t: int, s: int, l: int, budget: int = DEFAULT_DESIGN_BUDGET) -> Iterator[Superset]:
    """All antichains of 1..s parts with sizes at most ``l``.

    Refuses (BudgetExceeded) when the crude upper count exceeds ``budget``.
    """
    if s < 1 or l < 1 or t < 1:
        raise ParameterError("t, s and l must be positive")
    upper = relaxed_count_upper(t, s, l)
    if upper > budget:
        raise BudgetExceeded(
            f"relaxed family may hold up to {upper} supersets (budget {budget})", upper, budget
        )
    cands = relaxed_candidates(t, l)
    masks = [sum(1 << j for j in P) for P in cands]

    def rec(chosen: list[int], start: int):
        if chosen:
            yield Superset(tuple(sorted(cands[i] for i in chosen)), RELAXED)
        if len(chosen) == s:
            return
        for i in range(start, len(cands)):
            mi = masks[i]
            if any(masks[c] & mi == masks[c] or masks[c] & mi == mi for c in chosen):
                continue
            chosen.append(i)
            yield from rec(chosen, i + 1)
            chosen.pop()

    yield from rec([], 0)


def count_relaxed(t: int, s: int, l: int, budget: int = DEFAULT_DESIGN_BUDGET) -> int:
    return sum(1 for _ in enumerate_relaxed(t, s, l, budget))


@dataclass
class DesignAnalysisReport:
    s: int
    l: int
    t: int
    model: str
    n_bad: int
    n_good: int
    total: int
    epsilon: Fraction
    bad_supersets: list[Superset]
    bad_supersets_overflow: bool = False
    n_classes: int = 0

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "l": self.l,
            "t": self.t,
            "model": self.model,
            "n_bad": self.n_bad,
            "n_good": self.n_good,
            "total": self.total,
            "epsilon": {
                "num": self.epsilon.numerator,
                "den": self.epsilon.denominator,
                "float": float(self.epsilon),
            },
            "bad_supersets": [p.to_external() for p in self.bad_supersets],
            "bad_supersets_overflow": self.bad_supersets_overflow,
        }


def _family(t: int, s: int, l: int, model: str, budget: int):
    if model == STRICT:
        total = count_strict(t, s, l)
        if total > budget:
            raise BudgetExceeded(f"strict family has {total} supersets (budget {budget})", total, budget)
        return enumerate_strict(t, s, l)
    if model == RELAXED:
        return enumerate_relaxed(t, s, l, budget)
    raise ParameterError(f"unknown model {model!r}")


def analyze_design(
    X: BinaryCode,
    s: int,
    l: int,
    model: str = STRICT,
    budget: int = DEFAULT_DESIGN_BUDGET,
    cap: int = DEFAULT_CAP,
) -> DesignAnalysisReport:
    """Group all supersets of the family by outcome; a superset is bad iff its class has >1 member."""
    t = X.n_cols
    classes: dict[int, list[Superset]] = {}
    total = 0
    for p in _family(t, s, l, model, budget):
        classes.setdefault(outcome_mask(X, p.parts), []).append(p)
        total += 1
    bad: list[Superset] = []
    n_bad = 0
    for members in classes.values():
        if len(members) > 1:
            n_bad += len(members)
            bad.extend(members)
    bad.sort(key=lambda p: p.parts)
    return DesignAnalysisReport(
        s=s,
        l=l,
        t=t,
        model=model,
        n_bad=n_bad,
        n_good=total - n_bad,
        total=total,
        epsilon=Fraction(n_bad, total) if total else Fraction(0),
        bad_supersets=bad[:cap],
        bad_supersets_overflow=len(bad) > cap,
        n_classes=len(classes),
    )


def is_cf_design(X: BinaryCode, s: int, l: int, budget: int = DEFAULT_DESIGN_BUDGET) -> bool:
    """Injectivity of the outcome map on the relaxed family."""
    return analyze_design(X, s, l, RELAXED, budget, cap=0).n_bad == 0


@dataclass
class Implication:
    name: str
    antecedent: bool
    consequent: bool | None

    @property
    def violated(self) -> bool:
        return self.antecedent and self.consequent is False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "antecedent": self.antecedent,
            "consequent": self.consequent,
            "violated": self.violated,
        }


@dataclass
class ImplicationReport:
    s: int
    l: int
    implications: list[Implication]

    @property
    def ok(self) -> bool:
        return not any(i.violated for i in self.implications)

    def to_dict(self) -> dict:
        return {"s": self.s, "l": self.l, "ok": self.ok, "implications": [i.to_dict() for i in self.implications]}


def check_implications(X: BinaryCode, s: int, l: int, budget: int = DEFAULT_DESIGN_BUDGET) -> ImplicationReport:
    """Evaluate: CF (s,l)-code => CF (s,l)-design; CF (s,l)-design => CF (s-1,l)- and CF (s,l-1)-codes.

    Consequents are only computed when their antecedent holds.
    """
    t = X.n_cols
    if s + l > t:
        raise ParameterError(f"need s + l <= t, got s={s}, l={l}, t={t}")
    code = is_cf_code(X, s, l, 0)
    design = is_cf_design(X, s, l, budget)
    out = [Implication("code(s,l) => design(s,l)", code, design if code else None)]
    if s > 1:
        out.append(Implication("design(s,l) => code(s-1,l)", design, is_cf_code(X, s - 1, l, 0) if design else None))
    if l > 1:
        out.append(Implication("design(s,l) => code(s,l-1)", design, is_cf_code(X, s, l - 1, 0) if design else None))
    return ImplicationReport(s, l, out)


@dataclass
class ProjectionBound:
    epsilon_code: Fraction
    bound: Fraction
    epsilon_design: Fraction | None = None

    @property
    def clipped(self) -> Fraction:
        return min(Fraction(1), self.bound)

    @property
    def holds(self) -> bool | None:
        if self.epsilon_design is None:
            return None
        return self.epsilon_design <= self.clipped


def projection_bad_bound(X: BinaryCode, s: int, l: int, with_design: bool = True,
                         budget: int = DEFAULT_DESIGN_BUDGET) -> ProjectionBound:
    """Bound the strict-design error by l**s times the code error.

    A bad strict superset has at least one bad projection (one index taken from
    each part), and each of the l**s projections is an s-subset.
    """
    eps_code = analyze(X, s, l, mode="exact", cap=0).epsilon
    result = ProjectionBound(eps_code, eps_code * l**s)
    if with_design:
        result.epsilon_design = analyze_design(X, s, l, STRICT, budget, cap=0).epsilon
    return result
