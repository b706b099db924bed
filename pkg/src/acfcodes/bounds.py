"""Random coding exponents and capacity bounds for almost cover-free codes.

All logarithms are base 2.  Notation follows the constant-weight ensemble:
``Q`` is the relative column weight, ``q`` the relative weight of the union
of ``s`` columns, ``q_hat = 1 - (1 - Q)**s`` its typical value.

* ``A(s, Q, q)``: exponent of the probability that ``s`` columns have union
  weight ``q N``.  Parametrized by ``y`` with ``q = Q (1 - y**s) / (1 - y)``.
* ``D(l, Q, q)``: exponent of the probability that the conjunction of ``l``
  further columns is covered by a union of weight ``q N``.  Parametrized by
  ``z`` solving ``Q = (1-z) - (1-q) z (1-z)**l / (1 - (1-z)**l)``.
* capacity lower bound ``(1/l) max_Q D(l, Q, q_hat)`` and the error exponent
  ``max_Q min_q A + [D - l R]^+``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .combinatorics import strict_superset_count
from .optimize import DomainError, SolverInfo, bisect, bisect_vec, golden_section

LOG2E = math.log2(math.e)
INSET = 1e-9
Z_LO = 1e-300
Z_HI = 1.0 - 2.0**-53


def binary_entropy(a: float) -> float:
    if not 0 <= a <= 1:
        raise DomainError(f"binary entropy needs a in [0, 1], got {a}")
    if a == 0 or a == 1:
        return 0.0
    return -(a * math.log2(a) + (1 - a) * math.log2(1 - a))


def pos_part(x: float) -> float:
    return x if x > 0 else 0.0


def _h_vec(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -(a * np.log2(a) + (1 - a) * np.log2(1 - a))
    return np.where((a <= 0) | (a >= 1), 0.0, out)


def _check_Q(Q: float) -> None:
    if not 0 < Q < 1:
        raise DomainError(f"Q must lie in (0, 1), got {Q}")


def _require_l(l: int) -> None:
    if l < 2:
        raise DomainError(
            f"l = {l}: the covering exponent here is derived for l >= 2; "
            "l = 1 is the almost disjunctive list-decoding case, treated separately in the literature"
        )


def q_hat(Q: float, s: int) -> float:
    _check_Q(Q)
    if s < 1:
        raise DomainError(f"s must be positive, got {s}")
    return -math.expm1(s * math.log1p(-Q))


def q_interval(s: int, Q: float) -> tuple[float, float]:
    """Open interval of admissible union weights: (Q, min(1, s Q))."""
    return Q, min(1.0, s * Q)


# --- union weight exponent A ------------------------------------------------


def _q_of_y(y, s: int, Q: float):
    # Q (1 - y^s) / (1 - y), via expm1/log for accuracy near y = 1
    return Q * -np.expm1(s * np.log(y)) / (1 - y)


def _q_of_y_scalar(y: float, s: int, Q: float) -> float:
    return Q * -math.expm1(s * math.log(y)) / (1 - y)


def solve_y(s: int, Q: float, q: float, info: bool = False):
    """The unique y in (0, 1) with q = Q (1 - y**s)/(1 - y)."""
    _check_Q(Q)
    if s < 2:
        raise DomainError(f"s must be at least 2, got {s}")
    lo, hi = q_interval(s, Q)
    if not lo < q < hi:
        raise DomainError(f"q = {q} outside the open interval ({lo}, {hi})")
    y, si = bisect(lambda y: _q_of_y_scalar(y, s, Q) - q, Z_LO, Z_HI, xtol=1e-15)
    return (y, si) if info else y


def _A_scalar(s: int, Q: float, q: float, y: float) -> float:
    first = (1 - q) * math.log2(1 - q) if q < 1 else 0.0
    log_y = math.log2(y)
    log_1my = math.log2(1 - y)
    return (first + q * (math.log2(Q) + s * log_y - log_1my)
            + s * Q * (log_1my - log_y) + s * binary_entropy(Q))


def _A_from_y(s: int, Q: float, q, y):
    one_minus_q = 1 - q
    with np.errstate(divide="ignore", invalid="ignore"):
        first = np.where(one_minus_q > 0, one_minus_q * np.log2(np.where(one_minus_q > 0, one_minus_q, 1.0)), 0.0)
    log_y = np.log2(y)
    log_1my = np.log2(1 - y)
    return (
        first
        + q * (math.log2(Q) + s * log_y - log_1my)
        + s * Q * (log_1my - log_y)
        + s * binary_entropy(Q)
    )


def A_exponent(s: int, Q: float, q: float) -> float:
    return _A_scalar(s, Q, q, solve_y(s, Q, q))


def _solve_y_vec(s: int, Q: float, q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return bisect_vec(lambda y: _q_of_y(y, s, Q) - q, np.full(q.shape, Z_LO), np.full(q.shape, Z_HI), 64)


def A_exponent_vec(s: int, Q: float, q: np.ndarray) -> np.ndarray:
    y = _solve_y_vec(s, Q, q)
    return _A_from_y(s, Q, np.asarray(q, dtype=float), y)


# --- covering exponent D ----------------------------------------------------


def _pow1mz(z, l: int):
    """(1 - z)**l and 1 - (1 - z)**l, both computed without cancellation."""
    e = l * np.log1p(-z)
    return np.exp(e), -np.expm1(e)


def _Q_of_z(z, l: int, q):
    w, one_minus_w = _pow1mz(z, l)
    return (1 - z) - (1 - q) * z * w / one_minus_w


def _Q_of_z_scalar(z: float, l: int, q: float) -> float:
    e = l * math.log1p(-z)
    return (1 - z) - (1 - q) * z * math.exp(e) / -math.expm1(e)


def _D_scalar(l: int, Q: float, q: float, z: float) -> float:
    e = l * math.log1p(-z)
    w, one_minus_w = math.exp(e), -math.expm1(e)
    c = (1 - Q) / z
    return ((1 - Q) * l * math.log2(z) - (1 - q) * math.log2(one_minus_w)
            + l * (c * (1 - z) - (c - q) * w) * math.log1p(-z) / math.log(2)
            + l * binary_entropy(Q))


def _check_zq(l: int, Q: float, q: float) -> None:
    _require_l(l)
    _check_Q(Q)
    if not 0 < q <= 1:
        raise DomainError(f"q must lie in (0, 1], got {q}")
    top = (l - 1 + q) / l
    if not Q < top:
        raise DomainError(f"no z in (0, 1) solves the weight equation for l={l}, Q={Q}, q={q}: need Q < {top}")


def solve_z(l: int, Q: float, q: float, info: bool = False):
    """The unique z in (0, 1) with Q = ((1-z)(1-(1-z)^l) - (1-q) z (1-z)^l) / (1-(1-z)^l)."""
    _check_zq(l, Q, q)
    z, si = bisect(lambda z: _Q_of_z_scalar(z, l, q) - Q, Z_LO, Z_HI, xtol=1e-15)
    return (z, si) if info else z


def _solve_z_vec(l: int, Q, q) -> np.ndarray:
    Q = np.asarray(Q, dtype=float)
    q = np.asarray(q, dtype=float)
    shape = np.broadcast(Q, q).shape
    with np.errstate(divide="ignore", invalid="ignore"):
        return bisect_vec(lambda z: _Q_of_z(z, l, q) - Q, np.full(shape, Z_LO), np.full(shape, Z_HI), 64)


def _D_from_z(l: int, Q, q, z):
    w, one_minus_w = _pow1mz(z, l)
    c = (1 - Q) / z
    return (
        (1 - Q) * l * np.log2(z)
        - (1 - q) * np.log2(one_minus_w)
        + l * (c * (1 - z) - (c - q) * w) * np.log1p(-z) / math.log(2)
        + l * _h_vec(Q)
    )


def D_closed(l: int, Q: float, q: float) -> float:
    """Closed-form covering exponent at the extremal type, for any admissible q."""
    return _D_scalar(l, Q, q, solve_z(l, Q, q))


def D_closed_vec(l: int, Q, q) -> np.ndarray:
    _require_l(l)
    z = _solve_z_vec(l, Q, q)
    return _D_from_z(l, np.asarray(Q, dtype=float), np.asarray(q, dtype=float), z)


def D_at_qhat(l: int, Q: float, s: int) -> float:
    return D_closed(l, Q, q_hat(Q, s))


@dataclass
class TypeDistribution:
    """A probability distribution over row patterns in {0,1}^l."""

    l: int
    Q: float
    q: float
    z: float
    tau: dict[tuple[int, ...], float]

    @property
    def all_ones(self) -> float:
        return self.tau[(1,) * self.l]

    def total(self) -> float:
        return math.fsum(self.tau.values())

    def marginals(self) -> list[float]:
        return [math.fsum(p for a, p in self.tau.items() if a[i]) for i in range(self.l)]


def extremal_type(l: int, Q: float, q: float) -> TypeDistribution:
    """The minimizing type for the covering exponent.

    tau(a) = ((1-Q)/z) (1-z)^|a| z^(l-|a|) for a != 1...1, and the all-ones
    pattern takes the remaining mass 1 - ((1-Q)/z)(1 - (1-z)^l).
    """
    z = solve_z(l, Q, q)
    c = (1 - Q) / z
    w, one_minus_w = (float(v) for v in _pow1mz(z, l))
    tau = {}
    for a in product((0, 1), repeat=l):
        k = sum(a)
        tau[a] = c * (1 - z) ** k * z ** (l - k) if k < l else 1 - c * one_minus_w
    bad = {a: p for a, p in tau.items() if not 0 < p < 1}
    if bad:
        raise DomainError(f"extremal type leaves (0, 1) at Q={Q}, q={q}: {bad}")
    return TypeDistribution(l, Q, q, z, tau)


def type_objective(tau: dict[tuple[int, ...], float], l: int, Q: float, q: float) -> float:
    """sum tau log tau - q h(tau(1)/q) + h(tau(1)) + l h(Q)."""
    t1 = tau[(1,) * l]
    if not 0 <= t1 <= q:
        raise DomainError(f"tau(1...1) = {t1} must lie in [0, q = {q}]")
    neg_ent = math.fsum(p * math.log2(p) for p in tau.values() if p > 0)
    return neg_ent - q * binary_entropy(t1 / q) + binary_entropy(t1) + l * binary_entropy(Q)


def D_exponent(l: int, Q: float, q: float) -> float:
    """Covering exponent evaluated directly on the extremal type."""
    T = extremal_type(l, Q, q)
    return type_objective(T.tau, l, Q, q)


@dataclass
class BoundPoint:
    s: int
    l: int
    Q: float
    q: float
    q_hat: float
    z: float
    y: float
    z_residual: float
    y_residual: float


def bound_point(s: int, l: int, Q: float, q: float | None = None) -> BoundPoint:
    qh = q_hat(Q, s)
    q = qh if q is None else q
    z = solve_z(l, Q, q)
    y = solve_y(s, Q, q)
    return BoundPoint(
        s, l, Q, q, qh, z, y,
        z_residual=abs(_Q_of_z_scalar(z, l, q) - Q),
        y_residual=abs(_q_of_y_scalar(y, s, Q) - q),
    )


# --- capacity and exponent --------------------------------------------------


@dataclass
class BoundResult:
    value: float
    argmax_Q: float | None = None
    argmin_q: float | None = None
    q_hat: float | None = None
    z: float | None = None
    solver: SolverInfo | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax_Q": self.argmax_Q,
            "argmin_q": self.argmin_q,
            "q_hat": self.q_hat,
            "z": self.z,
            "solver": self.solver.to_dict() if self.solver else None,
            "diagnostics": self.diagnostics,
        }


def Q_grid(step: float = 1e-3) -> np.ndarray:
    """Coarse grid on (0, 1), with extra log-spaced points below ``step`` for large s."""
    main = np.arange(1, int(round(1 / step))) * step
    low = np.geomspace(1e-6, step, 40, endpoint=False)
    return np.unique(np.concatenate([low, main]))


def _local_maxima(v: np.ndarray, floor: float = 1e-12) -> int:
    """Grid local maxima, ignoring round-off wiggles where the curve is ~0."""
    inner = (v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]) & (v[1:-1] > floor)
    return int(inner.sum()) + int(v[0] > v[1] and v[0] > floor) + int(v[-1] > v[-2] and v[-1] > floor)


def capacity_lower(s: int, l: int, grid_step: float = 1e-3, xtol: float = 1e-9) -> BoundResult:
    """(1/l) max_Q D(l, Q, q_hat): coarse grid, then golden-section refinement.

    Unimodality in Q is not known; the number of grid local maxima is reported.
    """
    _require_l(l)
    if s < 1:
        raise DomainError("s must be positive")
    Qs = Q_grid(grid_step)
    qh = -np.expm1(s * np.log1p(-Qs))
    vals = D_closed_vec(l, Qs, qh)
    i = int(np.nanargmax(vals))
    lo, hi = Qs[max(i - 1, 0)], Qs[min(i + 1, len(Qs) - 1)]
    Qstar, Dstar, info = golden_section(lambda Q: D_at_qhat(l, Q, s), lo, hi, xtol=xtol, maximize=True)
    return BoundResult(
        value=Dstar / l,
        argmax_Q=Qstar,
        q_hat=q_hat(Qstar, s),
        z=solve_z(l, Qstar, q_hat(Qstar, s)),
        solver=info,
        diagnostics={
            "grid_points": int(len(Qs)),
            "grid_local_maxima": _local_maxima(vals),
            "grid_max_at_boundary": i in (0, len(Qs) - 1),
            "D_max": Dstar,
        },
    )


def capacity_upper(s: int, l: int) -> float:
    if s < 1 or l < 1:
        raise DomainError("s and l must be positive")
    return 1.0 / (s * l)


def superset_count(t: int, s: int, l: int) -> int:
    return strict_superset_count(t, s, l)


def design_error_floor(N: int, R: float, s: int, l: int) -> float:
    """1 - 2^N / |strict family| for t = floor(2^(R N)), clipped to [0, 1].

    No CF (s,l,eps)-design of that size can have eps below this value,
    since good supersets must have pairwise distinct outcomes.
    """
    if N < 1 or R <= 0:
        raise DomainError("need N >= 1 and R > 0")
    x = R * N
    shift = max(0, int(x) - 60)  # beyond 2^60 only the leading 53 bits are meaningful
    t = math.floor(2.0 ** (x - shift)) << shift
    count = strict_superset_count(t, s, l)
    if count == 0:
        return 0.0
    floor = 1 - Fraction(2**N, count)
    return float(min(Fraction(1), max(Fraction(0), floor)))


def asymptotic_rates(s: int, l: int) -> dict:
    """Leading-order terms (o(1) dropped) of the large-s rate and capacity expressions."""
    if s < 2 or l < 1:
        raise DomainError("need s >= 2, l >= 1")
    e = math.e
    log_s = math.log2(s)
    return {
        "rate_upper": (l + 1) ** (l + 1) / (2 * e ** (l - 1)) * log_s / s ** (l + 1),
        "rate_lower": (l + 1) ** (l + 1) / e ** (l + 1) * log_s / s ** (l + 1),
        "capacity_lower_asym": LOG2E * l ** (l - 1) / (e**l * s**l),
        "asymptotic": True,
    }


def _objective(s: int, l: int, R: float, Q: float, q: float) -> float:
    return A_exponent(s, Q, q) + pos_part(D_closed(l, Q, q) - l * R)


def _objective_vec(s: int, l: int, R: float, Q: float, q: np.ndarray):
    d = D_closed_vec(l, Q, q)
    return A_exponent_vec(s, Q, q) + np.maximum(d - l * R, 0.0), d


def _n_local_minima(v: np.ndarray) -> int:
    if len(v) < 3:
        return 1
    inner = (v[1:-1] < v[:-2]) & (v[1:-1] <= v[2:])
    return int(inner.sum()) + int(v[0] < v[1]) + int(v[-1] < v[-2])


def exponent_lower_at_Q(s: int, l: int, R: float, Q: float, n_grid: int = 401,
                        fallback_resolution: float = 1e-4) -> BoundResult:
    """min over q in (Q, min(1, sQ)) of A(s,Q,q) + [D(l,Q,q) - l R]^+.

    The objective has a kink where D = l R; kinks are located by bisection
    and each smooth piece is minimized by golden section.  A piece whose grid
    values are not unimodal is rescanned on a dense grid first.
    """
    _require_l(l)
    _check_Q(Q)
    if R <= 0:
        raise DomainError("R must be positive")
    if s < 2:
        raise DomainError("s must be at least 2")
    qlo, qhi = q_interval(s, Q)
    a, b = qlo + INSET, qhi - INSET
    grid = np.linspace(a, b, n_grid)
    gv, dv = _objective_vec(s, l, R, Q, grid)
    sign = dv > l * R
    kinks = []
    for i in np.nonzero(sign[:-1] != sign[1:])[0]:
        k, _ = bisect(lambda q: D_closed(l, Q, q) - l * R, grid[i], grid[i + 1], xtol=1e-15)
        kinks.append(k)
    edges = [a] + kinks + [b]
    best = (math.inf, None, None)
    fallbacks = 0

    def f(q):
        return _objective(s, l, R, Q, q)

    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        pts = np.concatenate([[lo], grid[(grid > lo) & (grid < hi)], [hi]])
        vals = np.array([f(lo)] + list(gv[(grid > lo) & (grid < hi)]) + [f(hi)])
        if _n_local_minima(vals) > 1:
            fallbacks += 1
            n = max(3, int(math.ceil((hi - lo) / fallback_resolution)) + 1)
            pts = np.linspace(lo, hi, n)
            vals = _objective_vec(s, l, R, Q, pts)[0]
        j = int(np.argmin(vals))
        x, fx, info = golden_section(f, pts[max(j - 1, 0)], pts[min(j + 1, len(pts) - 1)], xtol=1e-11)
        if fx < best[0]:
            best = (fx, x, info)
    value, qstar, info = best
    return BoundResult(
        value=value,
        argmin_q=qstar,
        q_hat=q_hat(Q, s),
        solver=info,
        diagnostics={"kinks": kinks, "dense_fallbacks": fallbacks, "Q": Q},
    )


def exponent_lower(s: int, l: int, R: float, grid_step: float = 1e-3, n_inner: int = 101) -> BoundResult:
    """max over Q of exponent_lower_at_Q.

    The coarse pass evaluates the inner objective on a (Q, q) grid in one
    vectorized sweep; the best Q cell is then refined by golden section.
    """
    _require_l(l)
    if R <= 0:
        raise DomainError("R must be positive")
    Qs = Q_grid(grid_step)
    u = np.linspace(0.0, 1.0, n_inner)[None, :]
    lo = Qs[:, None] + INSET
    hi = np.minimum(1.0, s * Qs)[:, None] - INSET
    qq = np.concatenate([lo + (hi - lo) * u, -np.expm1(s * np.log1p(-Qs))[:, None]], axis=1)
    QQ = np.broadcast_to(Qs[:, None], qq.shape)
    d = D_closed_vec(l, QQ, qq)
    y = bisect_vec(lambda y: QQ * -np.expm1(s * np.log(y)) / (1 - y) - qq,
                   np.full(qq.shape, Z_LO), np.full(qq.shape, Z_HI), 64)
    with np.errstate(divide="ignore", invalid="ignore"):
        one_mq = 1 - qq
        first = np.where(one_mq > 0, one_mq * np.log2(np.where(one_mq > 0, one_mq, 1.0)), 0.0)
        A = (first + qq * (np.log2(QQ) + s * np.log2(y) - np.log2(1 - y))
             + s * QQ * (np.log2(1 - y) - np.log2(y)) + s * _h_vec(QQ))
    coarse = np.nanmin(A + np.maximum(d - l * R, 0.0), axis=1)
    i = int(np.nanargmax(coarse))
    a, b = Qs[max(i - 1, 0)], Qs[min(i + 1, len(Qs) - 1)]
    Qstar, Estar, info = golden_section(lambda Q: exponent_lower_at_Q(s, l, R, Q).value, a, b,
                                        xtol=1e-9, maximize=True)
    inner = exponent_lower_at_Q(s, l, R, Qstar)
    return BoundResult(
        value=Estar,
        argmax_Q=Qstar,
        argmin_q=inner.argmin_q,
        q_hat=q_hat(Qstar, s),
        solver=info,
        diagnostics={"grid_points": int(len(Qs)), "grid_local_maxima": _local_maxima(coarse)},
    )
