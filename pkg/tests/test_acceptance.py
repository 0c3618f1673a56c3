"""End-to-end acceptance checks for the whole package.

Each test is one acceptance criterion; the conftest terminal-summary hook
prints a PASS/FAIL line per criterion after the run.
"""

import math
import time

import numpy as np
import pytest

from tfc_solve import (
    CollocationConfig,
    ConstraintSpec,
    StateCostateProblem,
    build_betas,
    build_relative_betas,
    endpoint_values,
    eval_basis,
    fixed_case_expression,
    implied_initial_value,
    integrate_ivp,
    m_sweep,
    map_ode,
    shoot_state_costate,
    solve_problem,
    solve_state_costate,
)
from tfc_solve.embedding import FIXED_CASES, RelativeConstraintSpec
from tfc_solve.catalog import CATALOG


def _solve_catalog(pid, **cfg_kw):
    entry = CATALOG[pid]
    cfg = CollocationConfig(**{**dict(m=17, N=1000), **cfg_kw})
    return entry, solve_problem(entry.ode(), entry.constraint_triples(), cfg)


def _sweep_catalog(pid, m_hi=None):
    entry = CATALOG[pid]
    lo, hi = entry.sweep
    if m_hi is not None:
        hi = m_hi
    return entry, m_sweep(entry.ode(), entry.constraint_triples(),
                          range(lo, hi + 1))


def test_criterion_01_ivp_reproduction_and_rk4_comparison():
    entry = CATALOG["eq19"]
    start = time.perf_counter()
    sol = solve_problem(entry.ode(), entry.constraint_triples(),
                        CollocationConfig(m=17, N=1000))
    elapsed = time.perf_counter() - start
    t = np.linspace(1.0, 4.0, 1001)
    y, _, _ = sol.solution(t)
    ls_err = float(np.max(np.abs(y - entry.analytic(t)[0])))
    assert ls_err <= 1e-9, f"max error {ls_err:.3e} > 1e-9"
    assert elapsed < 1.0, f"solve took {elapsed:.3f} s"

    # fixed-step RK4 with h = 3e-3 over [1, 4] (1000 steps)
    ts, ys = integrate_ivp(entry.ode(), 1.0, 0.0, steps=1000)
    rk4_err = float(np.max(np.abs(ys[:, 0] - entry.analytic(ts)[0])))
    assert ls_err <= 1e-3 * rk4_err, (
        f"LS error {ls_err:.3e} not <= 1e-3 x RK4 error {rk4_err:.3e}")


def test_criterion_02_bvp_reproduction_with_derivatives():
    entry, report = CATALOG["eq26"], _sweep_catalog("eq26")[1]
    sol = solve_problem(entry.ode(), entry.constraint_triples(),
                        CollocationConfig(m=report.best_m, N=1000))
    y0, y1 = sol.solution(np.array([0.0, 1.0]))[0]
    assert abs(y0 - 1.0) <= 1e-12 and abs(y1 - 3.0) <= 1e-12

    t = np.linspace(0.0, 1.0, 1001)
    y, yd, ydd = sol.solution(t)
    ya, yda, ydda = entry.analytic(t)
    assert float(np.max(np.abs(y - ya))) <= 1e-10
    assert float(np.max(np.abs(yd - yda))) <= 1e-8
    assert float(np.max(np.abs(ydd - ydda))) <= 1e-6


def test_criterion_03_unknown_solution_convergence_depth():
    entry, report = _sweep_catalog("sec42")
    best = report.row(report.best_m)
    assert best.residual_std <= 1e-13, (
        f"min residual_std {best.residual_std:.3e} > 1e-13 (best m {report.best_m})")
    sol = solve_problem(entry.ode(), entry.constraint_triples(),
                        CollocationConfig(m=report.best_m, N=1000))
    worst = float(np.max(np.abs(sol.residuals)))
    assert worst <= 1e-12, f"max residual {worst:.3e} > 1e-12"


def test_criterion_04_no_solution_classification():
    entry, report = _sweep_catalog("eq27")
    assert report.classification == "no_solution"
    conds = [r.cond_PtP for r in report.per_m if r.error is None]
    assert max(conds) > 1e15
    # the constrained expression still pins the boundary values
    sol = solve_problem(entry.ode(), entry.constraint_triples(),
                        CollocationConfig(m=22, N=1000))
    y = sol.solution(np.array([0.0, math.pi]))[0]
    assert abs(y[0] - 1.0) <= 1e-9
    assert abs(y[1] - 2.0) <= 1e-9


def test_criterion_05_infinite_solutions_classification():
    _, report = _sweep_catalog("eq28")
    assert report.classification == "infinite_solutions"
    ok = [r for r in report.per_m if r.error is None]
    assert min(r.residual_std for r in ok) < 1e-6
    assert max(r.cond_PtP for r in ok) > 1e15


def test_criterion_06_embedding_property_suite():
    for case_id in sorted(FIXED_CASES):
        rng = np.random.default_rng(hash(case_id) % 2**32)
        for _ in range(100):
            values = tuple(rng.normal(size=2))
            expr = fixed_case_expression(case_id, values)
            coeffs = rng.normal(size=6)

            def g(x, order=0):
                x = np.asarray(x, dtype=float)
                out = np.zeros_like(x)
                for e, a in enumerate(coeffs):
                    if order > e:
                        continue
                    fac = 1.0
                    for i in range(order):
                        fac *= e - i
                    out = out + a * fac * x ** (e - order)
                return out

            g_at = [g(c.location, c.order) for c in expr.constraints]
            for c, v in zip(expr.constraints, values):
                out = expr.eval(np.array([c.location]), g(c.location),
                                g(c.location, 1), g(c.location, 2), g_at)
                assert abs(out[c.order][0] - v) <= 1e-9, case_id


def test_criterion_07_beta_builder_property_suite():
    def kronecker_gap(constraints):
        betas = build_betas(constraints)
        n = len(constraints)
        km = np.zeros((n, n))
        for k, c in enumerate(constraints):
            km[k] = betas.eval(c.location, deriv=c.order)[:, 0]
        return float(np.max(np.abs(km - np.eye(n))))

    rng = np.random.default_rng(1234)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        locs = rng.uniform(-1, 1, n)
        while len(np.unique(np.round(locs, 6))) < n:
            locs = rng.uniform(-1, 1, n)
        constraints = [ConstraintSpec(int(rng.integers(0, 3)), float(x))
                       for x in locs]
        assert kronecker_gap(constraints) <= 1e-10

    # first-derivative pair at two points
    assert kronecker_gap([ConstraintSpec(1, 0.0), ConstraintSpec(1, 1.0)]) <= 1e-10
    # mixed-order four-constraint set
    assert kronecker_gap([
        ConstraintSpec(2, -1.0), ConstraintSpec(0, 0.0),
        ConstraintSpec(0, 2.0), ConstraintSpec(1, 2.0),
    ]) <= 1e-10
    # relative (periodic-style) pair
    emb = build_relative_betas([
        RelativeConstraintSpec(0, 0.0, 1.0),
        RelativeConstraintSpec(1, 0.0, 1.0),
    ])
    g = lambda t: np.asarray(t, dtype=float) ** 3
    dg = lambda t: 3.0 * np.asarray(t, dtype=float) ** 2
    y, yd = emb.eval_with(np.array([0.0, 1.0]), g, dg)
    assert abs(y[0] - y[1]) <= 1e-10 and abs(yd[0] - yd[1]) <= 1e-10


def test_criterion_08_chebyshev_identity_suite():
    for endpoint in (-1, 1):
        be = eval_basis(30, 2, float(endpoint))
        for k in range(31):
            t0, t1, t2 = endpoint_values(k, endpoint)
            assert abs(t0 - be.values[k]) <= 1e-10
            assert abs(t1 - be.derivs[1][k]) <= 1e-10
            assert abs(t2 - be.derivs[2][k]) <= 1e-10

    h = 1e-5
    for x in np.linspace(-0.9, 0.9, 19):
        be = eval_basis(12, 2, float(x))
        lo = eval_basis(12, 0, float(x - h)).values
        mid = eval_basis(12, 0, float(x)).values
        hi = eval_basis(12, 0, float(x + h)).values
        fd1 = (hi - lo) / (2 * h)
        fd2 = (hi - 2 * mid + lo) / h**2
        for k in range(2, 13):
            assert abs(be.derivs[1][k] - fd1[k]) <= 1e-5 * max(abs(fd1[k]), 1.0)
            assert abs(be.derivs[2][k] - fd2[k]) <= 1e-5 * max(abs(fd2[k]), 1.0)


def test_criterion_09_optimal_control_suite():
    Z = np.zeros((2, 2))

    # zero dynamics: constant state and costate, exactly
    prob0 = StateCostateProblem(
        A11=lambda t: Z, A12=lambda t: Z, A21=lambda t: Z, A22=lambda t: Z,
        x0=np.array([0.7, -0.2]), lambda_f=np.array([1.5, 0.3]),
        t0=0.0, tf=1.0,
    )
    sol0 = solve_state_costate(prob0, CollocationConfig(m=8, N=60))
    tt = np.linspace(0, 1, 21)
    assert np.max(np.abs(sol0.state(tt) - np.asarray(prob0.x0)[:, None])) <= 1e-12
    assert np.max(np.abs(sol0.costate(tt)
                         - np.asarray(prob0.lambda_f)[:, None])) <= 1e-12

    # boundary embedding with random coefficient matrices
    rng = np.random.default_rng(77)
    for _ in range(10):
        mats = [rng.normal(size=(2, 2)) for _ in range(4)]
        prob = StateCostateProblem(
            A11=lambda t, a=mats[0]: a, A12=lambda t, a=mats[1]: a,
            A21=lambda t, a=mats[2]: a, A22=lambda t, a=mats[3]: a,
            x0=rng.normal(size=2), lambda_f=rng.normal(size=2),
            t0=0.0, tf=1.0,
        )
        sol = solve_state_costate(prob, CollocationConfig(m=8, N=60))
        assert np.max(np.abs(sol.state(0.0)[:, 0] - prob.x0)) <= 1e-11
        assert np.max(np.abs(sol.costate(1.0)[:, 0] - prob.lambda_f)) <= 1e-11

    # constant-A regulator problem against an integration + shooting oracle
    lqr = StateCostateProblem(
        A11=lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]),
        A12=lambda t: np.array([[0.0, 0.0], [0.0, -1.0]]),
        A21=lambda t: np.array([[-1.0, 0.0], [0.0, 0.0]]),
        A22=lambda t: np.array([[0.0, 0.0], [-1.0, 0.0]]),
        x0=np.array([1.0, 0.0]), lambda_f=np.array([0.0, 0.0]),
        t0=0.0, tf=2.0,
    )
    sol = solve_state_costate(lqr, CollocationConfig(m=20, N=200))
    ts, zs = shoot_state_costate(lqr, steps=4000)
    sample = np.linspace(0.0, 2.0, 101)
    z_ref = np.array([np.interp(sample, ts, zs[:, k]) for k in range(4)])
    assert np.max(np.abs(sol.state(sample) - z_ref[:2])) <= 1e-6
    assert np.max(np.abs(sol.costate(sample) - z_ref[2:])) <= 1e-6


def test_criterion_10_cross_case_consistency():
    entry = CATALOG["eq19"]
    ode = entry.ode()
    mapped = map_ode(ode)
    cfg = CollocationConfig(m=17, N=1000)

    # direct: y(t1) = 1, ydot(t1) = 0 (x-scaled slope is also 0)
    direct = solve_problem(ode, ("IVP_y_dy", (1.0, 0.0)), cfg)
    # the ODE at t1 pins the second derivative given the other two values
    ddy_x = implied_initial_value(mapped, {"y": 1.0, "dy_x": 0.0})
    via_y_ddy = solve_problem(ode, ("IVP_y_ddy", (1.0, ddy_x)), cfg)
    via_dy_ddy = solve_problem(ode, ("IVP_dy_ddy", (0.0, ddy_x)), cfg)

    t = np.linspace(1.0, 4.0, 1001)
    y_ref = direct.solution(t)[0]
    for other in (via_y_ddy, via_dy_ddy):
        gap = float(np.max(np.abs(other.solution(t)[0] - y_ref)))
        assert gap <= 1e-8, f"cross-case gap {gap:.3e} > 1e-8"
