"""Finite-radius engine: characteristic, proximity, counting, reports."""

import math

import numpy as np
import pytest
from mpmath import mp, workdps

from curvedist.entire import (
    ExpPolynomial,
    HolomorphicCurve,
    LinearODE,
    OdeSolution,
    Polynomial,
    QC,
)
from curvedist.projgeo import FlatLattice, Hyperplane, HyperplaneSystem
from curvedist.nevanlinna import (
    AnalysisReport,
    CurveAnalyzer,
    QuadratureSpec,
    RadialGrid,
    ReportRow,
    characteristic,
    count_zeros,
    counting_N,
    smt_report,
)

SPEC = QuadratureSpec(tol=1e-6, prec=30)


def line_curve():
    # the rational normal curve of degree 1 in P^1: (1 : z)
    return HolomorphicCurve([Polynomial([1]), Polynomial([0, 1])],
                            label="line")


def line_system():
    return HyperplaneSystem([
        Hyperplane([QC(1), QC(0)], name="a0"),
        Hyperplane([QC(0), QC(1)], name="a1"),
        Hyperplane([QC(1), QC(1)], name="a2"),
    ], name="line-planes")


# ---------------------------------------------------------------------------
# grids and precision ladders
# ---------------------------------------------------------------------------


def test_radial_grid_log_spacing():
    grid = RadialGrid.log_spaced(1.0, 100.0, 5)
    assert len(grid.radii) == 5
    assert grid.radii[0] == pytest.approx(1.0)
    assert grid.radii[-1] == pytest.approx(100.0)
    steps = np.diff(np.log(grid.radii))
    assert np.allclose(steps, steps[0])
    with pytest.raises(ValueError):
        RadialGrid.log_spaced(10.0, 1.0, 4)


def test_quadrature_spec_ladder():
    spec = QuadratureSpec(tol=1e-3, prec=30)
    ladder = list(spec.dps_ladder())
    assert ladder[0] == max(spec.prec + 25, 35)
    assert all(b > a for a, b in zip(ladder, ladder[1:]))
    assert len(ladder) == spec.escalation_rounds + 1
    assert spec.node_rel() == min(1e-8, spec.tol / 100)


# ---------------------------------------------------------------------------
# characteristic
# ---------------------------------------------------------------------------


def test_characteristic_line_exact():
    # ||(1, z)|| is constant on circles: T(r) = log sqrt(1 + r^2)
    T, err = characteristic(line_curve(), 1.0, SPEC)
    assert abs(T - 0.5 * math.log(2.0)) <= err + 1e-9
    T2, err2 = characteristic(line_curve(), 7.0, SPEC)
    assert abs(T2 - 0.5 * math.log(50.0)) <= err2 + 1e-9


def test_characteristic_monotone():
    vals = [characteristic(line_curve(), r, SPEC)[0]
            for r in (0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# counting, both routes
# ---------------------------------------------------------------------------


def test_counting_polynomial_exact_value():
    res = counting_N(Polynomial([-1, 0, 1]), 2.0, SPEC)
    assert res.count == 2
    assert res.value == pytest.approx(2 * math.log(2.0), abs=1e-12)
    assert res.routes_agree
    assert abs(res.jensen - res.value) <= 10 * SPEC.tol


def test_counting_origin_zero():
    res = counting_N(Polynomial([0, 1]), math.e, SPEC)
    assert res.count == 1
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_count_zeros_degree8_against_numpy():
    rng = np.random.default_rng(21)
    for _ in range(5):
        coeffs = rng.integers(-9, 10, size=(9, 2))
        if coeffs[-1][0] == 0 and coeffs[-1][1] == 0:
            coeffs[-1][0] = 1
        p = Polynomial([QC(int(a), int(b)) for a, b in coeffs])
        want = int(np.sum(np.abs(
            np.roots(np.array([complex(c.re, c.im)
                               for c in p.coeffs[::-1]])) ) < 3.0))
        got = count_zeros(p, 3.0, SPEC)
        assert got == want


def test_counting_exp_poly_dual_route():
    # e^z - 1 vanishes at 2 pi i k; three zeros lie inside r = 7
    f = ExpPolynomial({QC(1): Polynomial([1]), QC(0): Polynomial([-1])})
    res = counting_N(f, 7.0, SPEC)
    assert res.count == 3
    exact = math.log(7.0) + 2 * math.log(7.0 / (2 * math.pi))
    assert abs(res.jensen - exact) < 1e-4
    assert abs(res.jensen - res.step_mid) <= res.band + 10 * SPEC.tol
    assert res.routes_agree


def test_counting_zero_free():
    f = ExpPolynomial({QC(2): Polynomial([1])})
    res = counting_N(f, 5.0, SPEC)
    assert res.count == 0 and res.value == 0.0
    assert abs(res.jensen) <= 10 * SPEC.tol


# ---------------------------------------------------------------------------
# proximity and the first main theorem
# ---------------------------------------------------------------------------


def test_proximity_line_oracle():
    an = CurveAnalyzer(line_curve(), line_system(), SPEC)
    m, err, _ = an.proximity_m("a1", 2.0)
    # log(||a|| ||f|| / |<a, f>|) = log(sqrt(5)/2) on the circle r = 2
    assert abs(m - math.log(math.sqrt(5.0) / 2.0)) <= err + 1e-8


def test_first_main_theorem_constancy():
    an = CurveAnalyzer(line_curve(), line_system(), SPEC)
    for name in ("a0", "a1", "a2"):
        combos = []
        for r in (0.5, 2.0, 7.0):
            row = ReportRow(r_requested=r, r_used=r, nudged=False)
            T, _ = an.characteristic(r, row)
            m, _, _ = an.proximity_m(name, r, row)
            cres = an.counting(name, r, an.count_zeros_fn(
                an.sections[name], r, name), row)
            an._caches.clear()
            combos.append(float(m) + cres.value - float(T))
        assert max(combos) - min(combos) < 10 * SPEC.tol


def test_flat_proximity_ordering():
    # m_1 >= m_2 up to tolerance on a curve in P^2
    curve = HolomorphicCurve([
        Polynomial([1]), Polynomial([0, 1]), Polynomial([0, 0, 0, 1]),
    ], label="net")
    planes = [
        Hyperplane([QC(1), QC(0), QC(0)], name="p0"),
        Hyperplane([QC(0), QC(1), QC(0)], name="p1"),
        Hyperplane([QC(0), QC(0), QC(1)], name="p2"),
        Hyperplane([QC(1), QC(1), QC(1)], name="p3"),
    ]
    system = HyperplaneSystem(planes, name="net-planes")
    an = CurveAnalyzer(curve, system, QuadratureSpec(tol=1e-4, prec=30))
    row = an.analyze_radius(9.0)
    assert row.certified
    assert row.m_k[0] >= row.m_k[1] - 10 * an.spec.tol
    assert all(v >= -10 * an.spec.tol for v in row.m.values())


# ---------------------------------------------------------------------------
# radius nudging
# ---------------------------------------------------------------------------


def test_nudge_steps_off_a_zero():
    # section 2 + z vanishes at |z| = 2; the requested radius sits on it
    system = HyperplaneSystem([
        Hyperplane([QC(1), QC(0)], name="a0"),
        Hyperplane([QC(2), QC(1)], name="shifted"),
    ], name="nudge-planes")
    an = CurveAnalyzer(line_curve(), system, SPEC)
    row = an.analyze_radius(2.0)
    assert row.certified
    assert row.nudged
    assert row.r_used != 2.0
    assert abs(row.r_used - 2.0) <= 0.01 * 2.0 + 1e-12


# ---------------------------------------------------------------------------
# numeric Wronskian fallback
# ---------------------------------------------------------------------------


def test_numeric_wronskian_counting():
    # mixed closed forms force the quadrature Wronskian route:
    # W(1, e^z, z^2) = 2 e^z (1 - z) has a single zero at z = 1
    ode = LinearODE([Polynomial([1])])
    curve = HolomorphicCurve(
        [Polynomial([1]),
         OdeSolution(ode, [QC(1)], label="exp"),
         Polynomial([0, 0, 1])],
        label="mixed",
    )
    system = HyperplaneSystem([
        Hyperplane([QC(1), QC(0), QC(0)], name="b0"),
        Hyperplane([QC(0), QC(1), QC(0)], name="b1"),
        Hyperplane([QC(0), QC(0), QC(1)], name="b2"),
    ], name="mixed-planes")
    spec = QuadratureSpec(tol=1e-3, prec=30)
    an = CurveAnalyzer(curve, system, spec)
    row = an.analyze_radius(2.0)
    assert row.certified
    assert row.N1 == pytest.approx(math.log(2.0), abs=5e-3)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def test_smt_report_line_curve():
    grid = RadialGrid.log_spaced(1.0, 16.0, 5)
    rep = smt_report(line_curve(), line_system(), grid, SPEC)
    assert rep.invariant_violations == []
    assert [row.certified for row in rep.rows] == [True] * 5
    for row in rep.rows:
        # in P^1 every section is linear: N1 tracks the Wronskian constant
        assert row.N1 == 0.0
        assert row.S_thm1 == pytest.approx(
            2 * row.T - row.m_k[0], abs=1e-9)
    Ts = [row.T for row in rep.rows]
    assert all(b > a for a, b in zip(Ts, Ts[1:]))


def test_validate_flags_nonmonotone_characteristic():
    grid = RadialGrid.log_spaced(1.0, 4.0, 3)
    rep = smt_report(line_curve(), line_system(), grid, SPEC)
    rep.rows[1].T = rep.rows[0].T + 10.0  # corrupt one radius
    violations = rep.validate()
    assert any("characteristic" in v or "monotone" in v for v in violations)


def test_analyze_radius_caches_cleared():
    an = CurveAnalyzer(line_curve(), line_system(), SPEC)
    an.analyze_radius(2.0)
    assert an._caches == {}
