import math
from itertools import product

import numpy as np
import pytest
from scipy import optimize

from acfcodes.bounds import (
    A_exponent,
    A_exponent_vec,
    D_at_qhat,
    D_closed,
    D_closed_vec,
    D_exponent,
    asymptotic_rates,
    binary_entropy,
    bound_point,
    capacity_lower,
    capacity_upper,
    design_error_floor,
    exponent_lower,
    exponent_lower_at_Q,
    extremal_type,
    q_hat,
    solve_y,
    solve_z,
    superset_count,
    type_objective,
)
from acfcodes.optimize import DomainError

LOG2E = math.log2(math.e)
C22 = 0.05804057931469808


def h(a):
    return 0.0 if a in (0, 1) else -(a * math.log2(a) + (1 - a) * math.log2(1 - a))


def A_two_columns(Q, q):
    # for s = 2 the type is pinned down by the marginals and the union weight
    tau = [1 - q, q - Q, q - Q, 2 * Q - q]
    return sum(t * math.log2(t) for t in tau if t > 0) + 2 * h(Q)


def A_by_optimizer(s, Q, q):
    pats = list(product((0, 1), repeat=s))
    zero = pats.index((0,) * s)
    cons = [{"type": "eq", "fun": lambda x: x.sum() - 1}, {"type": "eq", "fun": lambda x: x[zero] - (1 - q)}]
    for i in range(s):
        idx = [k for k, a in enumerate(pats) if a[i]]
        cons.append({"type": "eq", "fun": lambda x, idx=idx: x[idx].sum() - Q})

    def f(x):
        x = np.clip(x, 1e-300, None)
        return float((x * np.log2(x)).sum()) + s * h(Q)

    x0 = np.full(len(pats), q / (len(pats) - 1))
    x0[zero] = 1 - q
    res = optimize.minimize(f, x0, constraints=cons, bounds=[(1e-12, 1)] * len(pats), method="SLSQP",
                            options={"ftol": 1e-14, "maxiter": 500})
    return res.fun


def D_two_brute(Q, q):
    # l = 2: tau(11) = x, tau(10) = tau(01) = Q - x, tau(00) = 1 - 2Q + x
    def F(x):
        tau = [1 - 2 * Q + x, Q - x, Q - x, x]
        return sum(t * math.log2(t) for t in tau if t > 0) - q * h(x / q) + h(x) + 2 * h(Q)

    lo, hi = max(0.0, 2 * Q - 1), min(Q, q)
    xs = np.linspace(lo, hi, 4001)
    vals = [F(x) for x in xs]
    j = int(np.argmin(vals))
    res = optimize.minimize_scalar(F, bounds=(xs[max(j - 1, 0)], xs[min(j + 1, len(xs) - 1)]), method="bounded",
                                   options={"xatol": 1e-13})
    return min(res.fun, vals[j])


def test_entropy_and_qhat():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0) == binary_entropy(1) == 0
    assert q_hat(0.5, 2) == 0.75
    assert q_hat(1e-12, 3) == pytest.approx(3e-12, rel=1e-9)
    with pytest.raises(DomainError):
        binary_entropy(1.5)


def test_domain_errors():
    with pytest.raises(DomainError, match="list-decoding"):
        D_closed(1, 0.3, 0.5)
    with pytest.raises(DomainError):
        solve_y(2, 0.3, 0.7)
    with pytest.raises(DomainError):
        solve_y(2, 0.3, 0.3)
    with pytest.raises(DomainError):
        solve_z(2, 0.9, 0.5)
    with pytest.raises(DomainError):
        A_exponent(2, 1.2, 0.5)


def test_frozen_values():
    assert A_exponent(2, 0.3, 0.4) == pytest.approx(0.19163120400671659745, rel=1e-13)
    assert solve_z(2, 0.25, 0.4375) == pytest.approx(5 / 7, rel=1e-13)


@pytest.mark.parametrize("s", [2, 3, 5, 8])
@pytest.mark.parametrize("Q", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_y_at_qhat_is_one_minus_Q(s, Q):
    assert solve_y(s, Q, q_hat(Q, s)) == pytest.approx(1 - Q, abs=1e-12)
    assert abs(A_exponent(s, Q, q_hat(Q, s))) < 1e-9


@pytest.mark.parametrize("Q", [0.1, 0.25, 0.4, 0.45])
def test_A_two_columns_closed_type(Q):
    for q in np.linspace(Q, 2 * Q, 23)[1:-1]:
        assert A_exponent(2, Q, q) == pytest.approx(A_two_columns(Q, q), abs=1e-11)


@pytest.mark.filterwarnings("ignore:Values in x were outside bounds")
@pytest.mark.parametrize("Q,q", [(0.2, 0.35), (0.2, 0.5), (0.3, 0.5), (0.3, 0.8), (0.15, 0.3)])
def test_A_three_columns_optimizer(Q, q):
    assert A_exponent(3, Q, q) == pytest.approx(A_by_optimizer(3, Q, q), abs=1e-6)


def test_A_vec_matches_scalar():
    qs = np.linspace(0.31, 0.89, 40)
    vec = A_exponent_vec(3, 0.3, qs)
    assert np.allclose(vec, [A_exponent(3, 0.3, q) for q in qs], atol=1e-12)


@pytest.mark.parametrize("s,Q", [(2, 0.3), (3, 0.2), (5, 0.1)])
def test_A_convex_and_nonnegative(s, Q):
    lo, hi = Q, min(1.0, s * Q)
    qs = np.linspace(lo, hi, 1002)[1:-1]
    a = A_exponent_vec(s, Q, qs)
    assert (a > -1e-12).all()
    assert (a[:-2] + a[2:] - 2 * a[1:-1] > -1e-12).all()


@pytest.mark.parametrize("l", [2, 3])
def test_D_closed_equals_type_objective(l):
    for Q in np.linspace(0.1, 0.6, 6):
        for s in (2, 3):
            qh = q_hat(Q, s)
            assert D_at_qhat(l, Q, s) == pytest.approx(D_exponent(l, Q, qh), abs=1e-10)
        for q in np.linspace(Q + 0.02, 0.98, 5):
            try:
                want = D_exponent(l, Q, q)
            except DomainError:
                continue
            assert D_closed(l, Q, q) == pytest.approx(want, abs=1e-10)


def test_D_matches_two_column_brute_force():
    for Q in (0.1, 0.2, 0.3, 0.4):
        for q in (0.3, 0.5, 0.7, 0.9):
            if Q >= q:
                continue
            assert D_closed(2, Q, q) == pytest.approx(D_two_brute(Q, q), abs=1e-8)


def test_D_vec_matches_scalar():
    qs = np.linspace(0.4, 0.95, 20)
    assert np.allclose(D_closed_vec(3, 0.35, qs), [D_closed(3, 0.35, q) for q in qs], atol=1e-11)


@pytest.mark.parametrize("l,Q,s", [(2, 0.3, 2), (3, 0.2, 3), (4, 0.15, 2)])
def test_extremal_type_constraints(l, Q, s):
    qh = q_hat(Q, s)
    T = extremal_type(l, Q, qh)
    assert T.total() == pytest.approx(1, abs=1e-11)
    for m in T.marginals():
        assert m == pytest.approx(Q, abs=1e-10)
    assert T.all_ones == pytest.approx(qh * (1 - T.z) ** l, abs=1e-11)


@pytest.mark.parametrize("l,Q,q", [(2, 0.3, 0.5), (3, 0.2, 0.6), (3, 0.4, 0.8)])
def test_extremal_type_is_stationary(l, Q, q):
    T = extremal_type(l, Q, q)
    pats = list(T.tau)
    x0 = np.array([T.tau[a] for a in pats])
    # directions preserving the total mass and every marginal
    A = np.array([[1.0] * len(pats)] + [[float(a[i]) for a in pats] for i in range(l)])
    null = np.linalg.svd(A)[2][A.shape[0]:]
    eps = 1e-6
    for v in null:
        fp = type_objective(dict(zip(pats, x0 + eps * v)), l, Q, q)
        fm = type_objective(dict(zip(pats, x0 - eps * v)), l, Q, q)
        assert abs(fp - fm) / (2 * eps) < 1e-6
    # and it is a minimum along each direction
    f0 = type_objective(T.tau, l, Q, q)
    for v in null:
        assert type_objective(dict(zip(pats, x0 + 1e-3 * v)), l, Q, q) > f0


def test_bound_point_residuals():
    p = bound_point(3, 2, 0.2)
    assert p.q == p.q_hat and p.y == pytest.approx(0.8, abs=1e-12)
    assert p.y_residual < 1e-12 and p.z_residual < 1e-12


def test_capacity_regression():
    r = capacity_lower(2, 2)
    assert r.value == pytest.approx(C22, rel=1e-9)
    assert r.argmax_Q == pytest.approx(0.52768, abs=1e-4)
    assert r.q_hat == pytest.approx(q_hat(r.argmax_Q, 2), rel=1e-12)


def test_capacity_second_solver_path():
    # derivative sign scan on a dense vectorised grid, then a bracketed root
    def g(Q):
        return float(D_closed_vec(2, Q, q_hat(Q, 2))) / 2

    Qs = np.linspace(0.01, 0.99, 9801)
    vals = D_closed_vec(2, Qs, -np.expm1(2 * np.log1p(-Qs))) / 2
    d = np.diff(vals)
    i = int(np.nonzero((d[:-1] > 0) & (d[1:] <= 0))[0][0])
    dg = lambda Q: (g(Q + 1e-7) - g(Q - 1e-7)) / 2e-7
    Qstar = optimize.brentq(dg, Qs[i], Qs[i + 2], xtol=1e-12)
    assert g(Qstar) == pytest.approx(C22, rel=1e-9)


@pytest.mark.parametrize("s", [2, 4, 7, 10])
@pytest.mark.parametrize("l", [2, 3, 4])
def test_capacity_sandwich(s, l):
    assert 0 < capacity_lower(s, l).value < capacity_upper(s, l)


def test_asymptotic_trend():
    ratio = {s: capacity_lower(s, 2).value / asymptotic_rates(s, 2)["capacity_lower_asym"] for s in (50, 200)}
    assert abs(ratio[200] - 1) < 0.25
    assert abs(ratio[200] - 1) < abs(ratio[50] - 1)


def test_asymptotic_rates_fields():
    d = asymptotic_rates(10, 2)
    assert d["asymptotic"] is True
    assert d["capacity_lower_asym"] == pytest.approx(LOG2E * 2 / (math.e**2 * 100))
    assert d["rate_lower"] < d["rate_upper"]


def test_exponent_threshold():
    c = capacity_lower(2, 2).value
    assert exponent_lower(2, 2, c - 1e-3).value > 0
    assert exponent_lower(2, 2, c + 1e-3).value < 1e-12


def test_exponent_decreasing_in_R():
    vals = [exponent_lower(2, 2, R).value for R in (0.01, 0.02, 0.04)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_exponent_inner_at_small_rate():
    r = exponent_lower_at_Q(2, 2, 0.01, 0.5)
    assert r.value > 0 and 0.5 < r.argmin_q < 1


def test_superset_count_and_floor():
    assert superset_count(5, 2, 2) == 15
    assert design_error_floor(200, 0.3, 2, 2) > 0.99
    assert design_error_floor(200, 0.1, 2, 2) == 0.0
    with pytest.raises(DomainError):
        design_error_floor(0, 0.3, 2, 2)


@pytest.mark.parametrize("s,l", [(2, 3), (9, 3), (10, 2)])
def test_capacity_profile_single_peak(s, l):
    # round-off wiggles near D = 0 must not count as extra maxima
    assert capacity_lower(s, l).diagnostics["grid_local_maxima"] == 1
