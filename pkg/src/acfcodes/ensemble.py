"""The random constant-weight ensemble: sampling, Monte Carlo, exact oracles.

Columns of an ``N x t`` code are drawn independently and uniformly from the
C(N, w) vectors of weight ``w = floor(Q N)``.  By exchangeability the bad-set
probability is the probability that ``S = {0, ..., s-1}`` is (s,l)-bad.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .core import BinaryCode, BudgetExceeded, ParameterError
from .cover import bad_witness

EXACT_RATIONAL_MAX_N = 64
MC_BLOCK = 1024


@dataclass(frozen=True)
class EnsembleParams:
    N: int
    t: int
    Q: float

    def __post_init__(self):
        if self.N < 2 or self.t < 2:
            raise ParameterError(f"need N >= 2 and t >= 2, got N={self.N}, t={self.t}")
        if not 0 < self.Q < 1:
            raise ParameterError(f"Q must lie in (0, 1), got {self.Q}")
        if not 1 <= self.w < self.N:
            raise ParameterError(f"weight floor(Q N) = {self.w} outside [1, N)")

    @property
    def w(self) -> int:
        return math.floor(self.Q * self.N)

    def to_dict(self) -> dict:
        return {"N": self.N, "t": self.t, "Q": self.Q, "w": self.w}


def sample_code(params: EnsembleParams, seed) -> BinaryCode:
    """Draw one code; each column is a uniform w-subset of the rows."""
    rng = np.random.default_rng(seed)
    cols = []
    for _ in range(params.t):
        rows = rng.choice(params.N, size=params.w, replace=False)
        cols.append(sum(1 << int(i) for i in rows))
    return BinaryCode(params.N, params.t, tuple(cols))


def p2_exact(N: int, w: int, s: int) -> dict[int, Fraction]:
    """Distribution of the weight of the union of ``s`` independent weight-w columns.

    After ``i`` columns with union weight ``u``, the next column adds ``d``
    new rows with probability C(N-u, d) C(u, w-d) / C(N, w).
    """
    if s < 1:
        raise ParameterError("s must be positive")
    if not 0 <= w <= N:
        raise ParameterError(f"weight {w} outside [0, {N}]")
    total = comb(N, w)
    dist = {w: Fraction(1)}
    for _ in range(s - 1):
        nxt: dict[int, Fraction] = {}
        for u, pu in dist.items():
            for d in range(0, min(w, N - u) + 1):
                c = comb(N - u, d) * comb(u, w - d)
                if c:
                    nxt[u + d] = nxt.get(u + d, Fraction(0)) + pu * Fraction(c, total)
        dist = nxt
    return dict(sorted(dist.items()))


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def p1_exact(N: int, w: int, l: int, k: int) -> Fraction | float:
    """Probability that the AND of ``l`` weight-w columns lies inside a fixed k-set.

    Inclusion-exclusion over the N-k rows outside the set:
    sum_j (-1)^j C(N-k, j) [C(N-j, w-j) / C(N, w)]^l.
    Exact rational for N <= 64; beyond that a float sum in log space.
    """
    if not 0 <= w <= N or not 0 <= k <= N or l < 1:
        raise ParameterError(f"bad arguments N={N}, w={w}, l={l}, k={k}")
    m = N - k
    if N <= EXACT_RATIONAL_MAX_N:
        total = comb(N, w)
        acc = Fraction(0)
        for j in range(0, min(m, w) + 1):
            term = comb(m, j) * Fraction(comb(N - j, w - j), total) ** l
            acc += -term if j % 2 else term
        return acc
    terms = []
    base = _log_comb(N, w)
    for j in range(0, min(m, w) + 1):
        lg = _log_comb(m, j) + l * (_log_comb(N - j, w - j) - base)
        terms.append((-1) ** j * math.exp(lg))
    return min(1.0, max(0.0, math.fsum(terms)))


def union_bound_expectation(params: EnsembleParams, s: int, l: int, exact: bool = False):
    """Upper bound on Pr{S is bad}: sum_k P2(k) * min(1, C(t-s, l) * P1(k))."""
    if s < 1 or l < 1:
        raise ParameterError("s and l must be positive")
    n_lambda = comb(params.t - s, l) if params.t - s >= l else 0
    acc = Fraction(0)
    for k, pk in p2_exact(params.N, params.w, s).items():
        p1 = p1_exact(params.N, params.w, l, k)
        term = min(Fraction(1), n_lambda * Fraction(p1))
        acc += pk * term
    return acc if exact else float(acc)


def exhaustive_bad_probability(params: EnsembleParams, s: int, l: int, budget: int = 5 * 10**7) -> Fraction:
    """Exact Pr{S bad} by enumerating every code of the ensemble.

    Only for tiny instances: the work is C(N, w)^t codes.
    """
    N, t, w = params.N, params.t, params.w
    if s + l > t:
        raise ParameterError("need s + l <= t")
    pool = [sum(1 << i for i in c) for c in combinations(range(N), w)]
    m = len(pool)
    n_codes = m**t
    if n_codes > budget:
        raise BudgetExceeded(f"{n_codes} codes to enumerate (budget {budget})", n_codes, budget)
    full = (1 << N) - 1
    cols = np.array(pool, dtype=np.uint64)
    lambdas = list(combinations(range(s, t), l))
    bad = 0
    # outer loop over the first column keeps memory at m^(t-1)
    rest_idx = np.indices((m,) * (t - 1)).reshape(t - 1, -1)
    rest = cols[rest_idx]  # shape (t-1, m^(t-1))
    for first in range(m):
        code = np.vstack([np.full(rest.shape[1], pool[first], dtype=np.uint64), rest])
        union = np.zeros(rest.shape[1], dtype=np.uint64)
        for j in range(s):
            union |= code[j]
        outside = np.uint64(full) & ~union
        hit = np.zeros(rest.shape[1], dtype=bool)
        for L in lambdas:
            conj = np.full(rest.shape[1], full, dtype=np.uint64)
            for j in L:
                conj &= code[j]
            hit |= (conj & outside) == 0
        bad += int(hit.sum())
    return Fraction(bad, n_codes)


@dataclass
class McEstimate:
    trials: int
    successes: int
    seed: int

    @property
    def p_hat(self) -> float:
        return self.successes / self.trials

    @property
    def std_error(self) -> float:
        p = self.p_hat
        return math.sqrt(p * (1 - p) / self.trials)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "p_hat": self.p_hat,
            "std_error": self.std_error,
            "seed": self.seed,
        }


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _sample_block(params: EnsembleParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """Boolean array (n, t, N): n codes, each column a uniform w-subset."""
    keys = rng.random((n, params.t, params.N))
    ranks = keys.argsort(axis=-1).argsort(axis=-1)
    return ranks < params.w


def _block_bad_count(codes: np.ndarray, s: int, l: int) -> int:
    union = codes[:, :s, :].any(axis=1)
    outside = ~union
    hit = np.zeros(codes.shape[0], dtype=bool)
    for L in combinations(range(s, codes.shape[1]), l):
        conj = codes[:, list(L), :].all(axis=1)
        hit |= ~(conj & outside).any(axis=1)
    return int(hit.sum())


def mc_bad_probability(params: EnsembleParams, s: int, l: int, trials: int, seed: int) -> McEstimate:
    """Monte Carlo frequency of ``{0..s-1}`` being (s,l)-bad.

    Trials are grouped into fixed blocks of MC_BLOCK; block ``b`` draws from
    its own stream SeedSequence(seed, spawn_key=(b,)), so results do not depend
    on evaluation order or on how blocks are distributed over workers.
    """
    if s + l > params.t:
        raise ParameterError("need s + l <= t")
    if trials < 1:
        raise ParameterError("trials must be positive")
    if seed is None:
        raise ParameterError("an explicit seed is required")
    hits = 0
    for b, start in enumerate(range(0, trials, MC_BLOCK)):
        n = min(MC_BLOCK, trials - start)
        hits += _block_bad_count(_sample_block(params, _block_rng(seed, b), n), s, l)
    return McEstimate(trials, hits, seed)


def mc_bad_probability_reference(params: EnsembleParams, s: int, l: int, trials: int, seed: int) -> McEstimate:
    """Slow per-trial path through ``sample_code`` and the combinatorial checker."""
    hits = 0
    S = tuple(range(s))
    for i in range(trials):
        X = sample_code(params, np.random.SeedSequence(seed, spawn_key=(0, i)))
        if bad_witness(X, S, l) is not None:
            hits += 1
    return McEstimate(trials, hits, seed)
