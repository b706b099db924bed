"""Classification of s-subsets as (s,l)-bad or good, and the error fraction."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .combinatorics import colex_subsets, rank_blocks
from .core import BinaryCode, BudgetExceeded, ParameterError, index_set, to_external, union_mask

DEFAULT_BUDGET = 10**9
DEFAULT_CAP = 10**5


def _check_params(X: BinaryCode, s: int, l: int) -> None:
    if s < 1 or l < 1:
        raise ParameterError(f"s and l must be positive, got s={s}, l={l}")
    if s + l > X.n_cols:
        raise ParameterError(f"need s + l <= t, got s={s}, l={l}, t={X.n_cols}")


def _find_zero_conj(masks: list[int], order: list[int], l: int) -> tuple[int, ...] | None:
    """Positions (into ``order``) of ``l`` masks whose AND is zero, or None."""
    n = len(order)
    if n < l:
        return None
    chosen: list[int] = []

    def extend(start: int, acc: int) -> bool:
        if acc == 0:
            # any completion is a witness
            rest = [i for i in range(n) if i not in chosen][: l - len(chosen)]
            chosen.extend(rest)
            return True
        if len(chosen) == l:
            return False
        need = l - len(chosen)
        for i in range(start, n - need + 1):
            chosen.append(i)
            if extend(i + 1, acc & masks[order[i]]):
                return True
            chosen.pop()
        return False

    if extend(0, -1):
        return tuple(sorted(order[i] for i in chosen))
    return None


def bad_witness(X: BinaryCode, S: tuple[int, ...], l: int) -> tuple[int, ...] | None:
    """Return an l-set Lambda outside S whose conjunction the union of S covers."""
    zero_rows = X.full_mask & ~union_mask(X, S)
    in_s = set(S)
    others = [j for j in range(X.n_cols) if j not in in_s]
    if len(others) < l:
        return None
    if zero_rows == 0:
        return tuple(others[:l])
    restricted = [X.columns[j] & zero_rows for j in others]
    for i, m in enumerate(restricted):
        if m == 0:
            rest = [k for k in range(len(others)) if k != i][: l - 1]
            return tuple(sorted([others[i]] + [others[k] for k in rest]))
    if l == 1:
        return None
    order = sorted(range(len(others)), key=lambda i: (restricted[i].bit_count(), i))
    hit = _find_zero_conj(restricted, order, l)
    if hit is None:
        return None
    return tuple(others[i] for i in hit)


def is_bad_set(X: BinaryCode, S, l: int, witness: bool = False):
    """Whether the s-subset ``S`` is (s,l)-bad for ``X``.

    With ``witness=True`` returns ``(flag, Lambda_or_None)``.
    """
    S = index_set(S, X.n_cols)
    _check_params(X, len(S), l)
    w = bad_witness(X, S, l)
    if witness:
        return w is not None, w
    return w is not None


@dataclass
class SampleInfo:
    trials: int
    seed: int
    std_error: float


@dataclass
class CoverAnalysisReport:
    s: int
    l: int
    t: int
    n_bad: int
    n_good: int
    total: int
    epsilon: Fraction
    mode: str
    bad_sets: list[tuple[int, ...]] | None = None
    bad_sets_overflow: bool = False
    sample_info: SampleInfo | None = None
    per_column_bad: list[int] | None = field(default=None, repr=False)

    @property
    def epsilon_float(self) -> float:
        return float(self.epsilon)

    def good_sets(self) -> list[tuple[int, ...]]:
        """All good s-subsets; only available when the bad list is complete."""
        if self.mode != "exact" or self.bad_sets is None or self.bad_sets_overflow:
            raise ValueError("good sets need an exact report with a complete bad list")
        bad = set(self.bad_sets)
        return [S for S in colex_subsets(self.t, self.s) if S not in bad]

    def to_dict(self) -> dict:
        d = {
            "s": self.s,
            "l": self.l,
            "t": self.t,
            "mode": self.mode,
            "n_bad": self.n_bad,
            "n_good": self.n_good,
            "total": self.total,
            "epsilon": {
                "num": self.epsilon.numerator,
                "den": self.epsilon.denominator,
                "float": float(self.epsilon),
            },
        }
        if self.bad_sets is not None:
            d["bad_sets"] = [to_external(S) for S in self.bad_sets]
            d["bad_sets_overflow"] = self.bad_sets_overflow
        if self.sample_info is not None:
            d["sample_info"] = {
                "trials": self.sample_info.trials,
                "seed": self.sample_info.seed,
                "std_error": self.sample_info.std_error,
            }
        return d


def exact_work(t: int, s: int, l: int) -> int:
    return comb(t, s) * comb(t - s, l)


def _scan_block(X: BinaryCode, s: int, l: int, start: int, stop: int, cap: int):
    n_bad = 0
    bad: list[tuple[int, ...]] = []
    per_col = [0] * X.n_cols
    for S in colex_subsets(X.n_cols, s, start, stop):
        if bad_witness(X, S, l) is not None:
            n_bad += 1
            for j in S:
                per_col[j] += 1
            if len(bad) < cap:
                bad.append(S)
    return n_bad, bad, per_col


def _scan_block_args(args):
    return _scan_block(*args)


def analyze(
    X: BinaryCode,
    s: int,
    l: int,
    mode: str = "exact",
    trials: int | None = None,
    seed: int | None = None,
    cap: int = DEFAULT_CAP,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> CoverAnalysisReport:
    """Count the (s,l)-bad subsets of ``X``.

    ``mode="exact"`` enumerates all C(t,s) subsets in colex order.
    ``mode="sample"`` draws ``trials`` uniform s-subsets with replacement
    and reports a binomial estimate; it never certifies anything.
    """
    _check_params(X, s, l)
    t = X.n_cols
    total = comb(t, s)
    if mode == "exact":
        work = exact_work(t, s, l)
        if work > budget:
            raise BudgetExceeded(
                f"exact analysis needs {work} cover checks (budget {budget}); use sampled mode",
                work,
                budget,
            )
        blocks = rank_blocks(total, workers)
        if workers > 1 and len(blocks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_scan_block_args, [(X, s, l, a, b, cap) for a, b in blocks]))
        else:
            parts = [_scan_block(X, s, l, a, b, cap) for a, b in blocks]
        n_bad = 0
        bad: list[tuple[int, ...]] = []
        per_col = [0] * t
        for nb, bl, pc in parts:
            n_bad += nb
            bad.extend(bl[: max(0, cap - len(bad))])
            per_col = [a + b for a, b in zip(per_col, pc)]
        return CoverAnalysisReport(
            s=s,
            l=l,
            t=t,
            n_bad=n_bad,
            n_good=total - n_bad,
            total=total,
            epsilon=Fraction(n_bad, total),
            mode="exact",
            bad_sets=bad,
            bad_sets_overflow=n_bad > len(bad),
            per_column_bad=per_col,
        )
    if mode in ("sample", "sampled"):
        if trials is None or trials < 1:
            raise ParameterError("sampled mode needs trials >= 1")
        if seed is None:
            raise ParameterError("sampled mode needs an explicit seed")
        rng = np.random.default_rng(seed)
        hits = 0
        for _ in range(trials):
            S = tuple(sorted(int(j) for j in rng.choice(t, size=s, replace=False)))
            if bad_witness(X, S, l) is not None:
                hits += 1
        p = hits / trials
        return CoverAnalysisReport(
            s=s,
            l=l,
            t=t,
            n_bad=hits,
            n_good=trials - hits,
            total=trials,
            epsilon=Fraction(hits, trials),
            mode="sampled",
            sample_info=SampleInfo(trials, seed, math.sqrt(p * (1 - p) / trials)),
        )
    raise ParameterError(f"unknown mode {mode!r}")


def is_cf_code(X: BinaryCode, s: int, l: int, epsilon: float | Fraction = 0, budget: int = DEFAULT_BUDGET) -> bool:
    """Exact check that at most an ``epsilon`` fraction of s-subsets is bad."""
    if not 0 <= epsilon <= 1:
        raise ParameterError(f"epsilon must lie in [0, 1], got {epsilon}")
    report = analyze(X, s, l, mode="exact", cap=0, budget=budget)
    eps = epsilon if isinstance(epsilon, Fraction) else Fraction(epsilon)
    return report.epsilon <= eps


def shrink_code(X: BinaryCode, s: int, l: int, budget: int = DEFAULT_BUDGET) -> tuple[BinaryCode, int]:
    """Delete the column contained in the fewest (s,l)-bad sets.

    The result is a CF (s-1, l, eps)-code whenever ``X`` is a CF (s, l, eps)-code:
    an (s-1)-set bad in the shrunk code extends by the deleted column to a bad
    s-set of ``X``, and the chosen column lies in at most C(t-1,s-1)*eps of those.
    Ties go to the smallest index.
    """
    if s < 2:
        raise ParameterError("shrinking needs s >= 2")
    _check_params(X, s, l)
    report = analyze(X, s, l, mode="exact", cap=0, budget=budget)
    counts = report.per_column_bad
    j = min(range(X.n_cols), key=lambda i: (counts[i], i))
    return X.delete_column(j), j
