"""Exact arithmetic, series solutions, and Wronskians."""

import math
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp, workdps

from curvedist.entire import (
    CurveError,
    ExpPolynomial,
    HolomorphicCurve,
    LinearODE,
    OdeSolution,
    Polynomial,
    QC,
    ZeroFreeExp,
    log_wronskian_quotient_residual,
    ring_det,
    wronskian_at,
    wronskian_closed_form,
    wronskian_series,
    wronskian_symbolic,
    wronskian_vanishing_order,
)


# ---------------------------------------------------------------------------
# exact scalars
# ---------------------------------------------------------------------------


def test_qc_field_arithmetic():
    a = QC(Fraction(1, 3), Fraction(-2, 7))
    b = QC(Fraction(5, 2), Fraction(1, 6))
    assert a + b == QC(Fraction(17, 6), Fraction(-5, 42))
    assert a * b - b * a == QC(0)
    # |a|^2 = (1/3)^2 + (2/7)^2 rationally
    assert a.abs2() == Fraction(1, 9) + Fraction(4, 49)
    assert (a * a.conj()).re == a.abs2()
    assert QC.parse([Fraction(3, 4), -2]) == QC(Fraction(3, 4), -2)


def test_qc_division_exact():
    a = QC(3, 4)
    b = QC(1, -2)
    q = a / b
    assert q * b == a


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def test_polynomial_roots_quadratic():
    p = Polynomial([-1, 0, 1])  # z^2 - 1
    roots = sorted(p.roots(prec=30), key=lambda z: (z.real, z.imag))
    assert abs(roots[0] + 1) < 1e-25
    assert abs(roots[1] - 1) < 1e-25


def test_polynomial_gcd_exact():
    p = Polynomial([-1, 0, 1])          # (z-1)(z+1)
    q = Polynomial([-1, 1]) * Polynomial([2, 1])
    g = p.gcd(q)
    # common factor z - 1, gcd is monic
    assert g.coeffs == Polynomial([-1, 1]).coeffs


def test_polynomial_ring_axioms_random():
    rng = np.random.default_rng(11)
    for _ in range(25):
        def rand_poly():
            deg = int(rng.integers(0, 5))
            return Polynomial([
                QC(int(rng.integers(-9, 10)), int(rng.integers(-9, 10)))
                for _ in range(deg + 1)
            ])
        p, q, s = rand_poly(), rand_poly(), rand_poly()
        assert (p + q) * s == p * s + q * s
        d, r = (p * s + q).divmod(s) if not s.is_zero else (None, None)
        if d is not None:
            assert d * s + r == p * s + q


def test_polynomial_vanishing_order():
    p = Polynomial([0, 0, QC(5)])
    ordm, lead = p.vanishing_order()
    assert ordm == 2 and lead == QC(5)


# ---------------------------------------------------------------------------
# exponential polynomials
# ---------------------------------------------------------------------------


def test_exppoly_eval_against_mpmath():
    # f(z) = (1 + z) e^{2z} - e^{-z}
    f = ExpPolynomial({QC(2): Polynomial([1, 1]), QC(-1): Polynomial([-1])})
    with workdps(30):
        z = mp.mpc("0.3", "-0.7")
        want = (1 + z) * mp.exp(2 * z) - mp.exp(-z)
        got = f.eval(z)
        assert abs(got - want) < 1e-24


def test_exppoly_cancellation_collapses():
    f = ExpPolynomial({QC(1): Polynomial([1])})
    g = f - f
    assert g.is_zero


def test_exppoly_derivative_product_rule():
    f = ExpPolynomial({QC(3): Polynomial([0, 1])})  # z e^{3z}
    d = f.derivative()
    # (z e^{3z})' = (1 + 3z) e^{3z}
    assert d == ExpPolynomial({QC(3): Polynomial([1, 3])})


# ---------------------------------------------------------------------------
# power-series ODE solutions
# ---------------------------------------------------------------------------


def exp_ode():
    # y' = y
    return LinearODE([Polynomial([1])])


def test_ode_exponential_matches_rational_series():
    # independent oracle: partial sums of 10^m / m! in exact rationals
    sol = OdeSolution(exp_ode(), [QC(1)], label="exp")
    acc = Fraction(0)
    term = Fraction(1)
    for m in range(1, 200):
        acc += term
        term = term * 10 / m
    with workdps(60):
        want = mp.mpf(acc.numerator) / acc.denominator
        got = sol.eval(10.0, prec=40)
        assert abs(got - want) / abs(want) < 1e-38


def test_ode_airy_type_taylor_coefficients():
    # y'' = z y with y(0) = 1, y'(0) = 0 has a_3 = 1/6, a_6 = 1/180
    ode = LinearODE([Polynomial([0, 1]), Polynomial([0])])
    sol = OdeSolution(ode, [QC(1), QC(0)])
    a = sol.exact_taylor(6)
    assert a[3] == QC(Fraction(1, 6))
    assert a[4] == QC(0)
    assert a[6] == QC(Fraction(1, 180))


def test_ode_third_order_recurrence():
    # y''' = (9/4)(y + z y'): a_{m+3} = (9/4) a_m / ((m+2)(m+3))
    nine4 = Fraction(9, 4)
    ode = LinearODE([
        Polynomial([QC(nine4)]),
        Polynomial([QC(0), QC(nine4)]),
        Polynomial([QC(0)]),
    ])
    sol = OdeSolution(ode, [QC(1), QC(0), QC(0)])
    a = sol.exact_taylor(6)
    assert a[3] == QC(Fraction(3, 8))
    assert a[6] == QC(Fraction(9, 320))


def test_ode_eval_at_origin_exact():
    # initial data are returned exactly at z = 0, including exact zeros
    ode = LinearODE([Polynomial([0, 1]), Polynomial([0])])  # y'' = z y
    sol = OdeSolution(ode, [QC(0), QC(1)])
    assert sol.eval(0, prec=30) == 0
    with workdps(30):
        assert abs(sol.eval(0, deriv=1, prec=25) - 1) < 1e-22
    sol2 = OdeSolution(exp_ode(), [QC(7)])
    with workdps(30):
        assert abs(sol2.eval(0, prec=25) - 7) < 1e-22


def test_ode_derivative_of_exponential():
    sol = OdeSolution(exp_ode(), [QC(1)])
    with workdps(40):
        v0 = sol.eval(mp.mpf("1.5"), prec=30)
        v1 = sol.eval(mp.mpf("1.5"), deriv=1, prec=30)
        assert abs(v0 - v1) < 1e-27


def test_ode_circle_block_error_bound_holest():
    # certified block error must dominate the true deviation from mp.exp
    sol = OdeSolution(exp_ode(), [QC(1)])
    block = sol.circle_block(2.0, 16, dps=30)
    with workdps(35):
        worst = mp.mpf(0)
        for k, v in enumerate(block.values):
            z = 2 * mp.exp(1j * 2 * mp.pi * k / 16)
            worst = max(worst, abs(v - mp.exp(z)))
        assert worst <= block.err + mp.mpf(10) ** -28


# ---------------------------------------------------------------------------
# Wronskians
# ---------------------------------------------------------------------------


def test_wronskian_monomials_exact():
    fns = [Polynomial([1]), Polynomial([0, 1]), Polynomial([0, 0, 0, 1])]
    w = wronskian_symbolic(fns)
    assert w == Polynomial([0, 6])


def test_wronskian_exponentials_exact():
    fns = [
        ExpPolynomial({QC(0): Polynomial([1])}),
        ExpPolynomial({QC(1): Polynomial([1])}),
        ExpPolynomial({QC(2): Polynomial([1])}),
    ]
    w = wronskian_symbolic(fns)
    # Vandermonde of (0, 1, 2) = 2, frequency sum 3
    assert w == ExpPolynomial({QC(3): Polynomial([2])})


def test_wronskian_numeric_matches_symbolic():
    fns = [Polynomial([1]), Polynomial([0, 1]), Polynomial([0, 0, 0, 1])]
    with workdps(30):
        z = mp.mpc("0.8", "0.1")
        got = wronskian_at(fns, z, prec=25)
        assert abs(got - 6 * z) < 1e-20


def test_wronskian_closed_form_shared_ode_constant():
    # no y^{(N-1)} coefficient means the Wronskian is constant (here 1)
    nine4 = Fraction(9, 4)
    ode = LinearODE([
        Polynomial([QC(nine4)]),
        Polynomial([QC(0), QC(nine4)]),
        Polynomial([QC(0)]),
    ])
    frame = [
        OdeSolution(ode, [QC(1), QC(0), QC(0)]),
        OdeSolution(ode, [QC(0), QC(1), QC(0)]),
        OdeSolution(ode, [QC(0), QC(0), QC(1)]),
    ]
    w = wronskian_closed_form(frame)
    assert isinstance(w, ZeroFreeExp)
    assert w.is_zero_free()
    with workdps(30):
        assert abs(w.eval(0.37) - 1) < 1e-25
    ordm, lead = wronskian_vanishing_order(frame, prec=40)
    assert ordm == 0
    with workdps(40):
        lead = lead.to_mpc() if isinstance(lead, QC) else lead
        assert abs(lead - 1) < 1e-30
    series, exact = wronskian_series(frame, 5, prec=40)
    assert exact
    assert series[0] == QC(1)
    assert all(c.is_zero for c in series[1:])


def test_wronskian_abel_route_picks_up_exponential():
    # y'' = y has P_1 = 0 ... use y'' = 2y' - y instead: W = W(0) e^{2z}
    ode = LinearODE([Polynomial([-1]), Polynomial([2])])
    fns = [OdeSolution(ode, [QC(1), QC(0)]), OdeSolution(ode, [QC(0), QC(1)])]
    w = wronskian_closed_form(fns)
    assert isinstance(w, ZeroFreeExp)
    with workdps(30):
        assert abs(w.eval(1.0) - mp.exp(2)) < 1e-22


def test_ring_det_mixed_polynomials():
    rows = [
        [Polynomial([1]), Polynomial([0, 1])],
        [Polynomial([0, 0, 1]), Polynomial([3])],
    ]
    d = ring_det(rows)
    assert d == Polynomial([3]) - Polynomial([0, 0, 0, 1])


def test_log_wronskian_quotient_identity_residual():
    fns = [Polynomial([1, 2]), Polynomial([0, 1, 1]), Polynomial([5, 0, 0, 1])]
    res = log_wronskian_quotient_residual(fns, 3.0 / 7.0, prec=30)
    assert res < 1e-15


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------


def test_curve_rejects_dependent_components():
    with pytest.raises(CurveError):
        HolomorphicCurve([
            Polynomial([1]), Polynomial([0, 1]), Polynomial([1, 1]),
        ])


def test_curve_rejects_common_zero():
    with pytest.raises(CurveError):
        HolomorphicCurve([
            Polynomial([0, 1]), Polynomial([0, 0, 1]), Polynomial([0, 0, 0, 1]),
        ])


def test_curve_value_at_origin_with_series_component():
    ode = LinearODE([Polynomial([0, 1]), Polynomial([0])])
    curve = HolomorphicCurve(
        [Polynomial([1]), OdeSolution(ode, [QC(0), QC(1)])], check=False,
    )
    w0 = curve.value_at_origin(30)
    assert w0[0] == 1 and w0[1] == 0


def test_curve_wronskian_cached_closed_form():
    curve = HolomorphicCurve([
        Polynomial([1]), Polynomial([0, 1]), Polynomial([0, 0, 0, 1]),
    ])
    w = curve.wronskian()
    assert w == Polynomial([0, 6])
    assert curve.wronskian() is w
