"""Asymptotic layer: exact indicator arithmetic and certificates."""

import pytest
import sympy as sp

from curvedist.entire import Polynomial
from curvedist.exactnum import QC
from curvedist.indicator import (
    AIRY_DEPENDENT_SETS,
    IndicatorError,
    PiecewiseIndicator,
    TrigArc,
    admissible_sum,
    airy_catalogue,
    asymptotic_certificate,
    characteristic_coefficient,
    classify_on_interval,
    exp123_catalogue,
    flat_proximity_coefficients,
    maximal_admissible_sum,
    pointwise_max,
    profile_envelopes,
    sector_decomposition,
    special_basis_profile,
    wronskian_indicator,
    zero_indicator,
)

PI = sp.pi


# ---------------------------------------------------------------------------
# arcs and piecewise indicators
# ---------------------------------------------------------------------------


def test_trig_arc_exact_calculus():
    arc = TrigArc(-PI, PI, -1, 0)
    rho = sp.Rational(3, 2)
    assert sp.simplify(arc.value(rho, PI / 3)) == 0
    assert sp.simplify(arc.integral(rho) - sp.Rational(4, 3)) == 0
    lo, hi = arc.extrema_on(rho)
    assert lo == -1 and hi == 1
    zs = arc.interior_zeros(rho)
    assert [sp.simplify(z) for z in zs] == [-PI / 3, PI / 3]


def test_indicator_validation():
    rho = sp.Rational(3, 2)
    with pytest.raises(IndicatorError):
        PiecewiseIndicator(rho, [TrigArc(-PI, 0, 1, 0)])  # gap at the top
    with pytest.raises(IndicatorError):
        PiecewiseIndicator(rho, [TrigArc(-PI, 0, 1, 0),
                                 TrigArc(0, PI, -1, 0)])  # jump at 0
    with pytest.raises(IndicatorError):
        # continuous at 0 but 3/2-frequency cosine is not 2-pi periodic
        PiecewiseIndicator(rho, [TrigArc(-PI, PI, 0, 1)])


def test_zero_indicator_and_scale():
    z = zero_indicator(1)
    assert z.integral() == 0
    assert z.positive_intervals() == []
    h = PiecewiseIndicator(sp.Rational(3, 2), [TrigArc(-PI, PI, -1, 0)])
    assert sp.simplify(h.scale(2).integral() - sp.Rational(8, 3)) == 0
    with pytest.raises(IndicatorError):
        h.scale(-1)


def test_shift_wraps_with_phase_rotation():
    h0 = airy_catalogue()["H0"]
    assert h0.shift(2 * PI) == h0
    assert h0.shift(PI / 5).shift(-PI / 5) == h0
    h1 = h0.shift(-2 * PI / 3)
    # wrapped pieces pick up a sign because rho = 3/2 rotates by an odd
    # multiple of pi across the seam
    assert sp.simplify(h1.value(0) - 1) == 0
    assert sp.simplify(h1.integral() - h0.integral()) == 0
    assert h1 != h0.shift(2 * PI / 3)


def test_positive_intervals_of_decaying_solution():
    h0 = airy_catalogue()["H0"]
    humps = h0.positive_intervals()
    assert len(humps) == 2
    assert sp.simplify(humps[0][0] + PI) == 0
    assert sp.simplify(humps[0][1] + PI / 3) == 0
    assert sp.simplify(humps[1][0] - PI / 3) == 0
    assert sp.simplify(humps[1][1] - PI) == 0


def test_envelope_hump_merges_across_seam():
    # cos(theta - pi) is positive on a hump straddling the seam
    h = PiecewiseIndicator(1, [TrigArc(-PI, PI, 1, 0)]).shift(PI)
    humps = h.positive_intervals()
    assert len(humps) == 1
    lo, hi = humps[0]
    assert sp.simplify(lo - PI / 2) == 0
    assert sp.simplify(hi - 3 * PI / 2) == 0


def test_pointwise_max_positive_part():
    fam = airy_catalogue()
    g0 = fam["G0"]
    assert g0 == pointwise_max([fam["H0"], zero_indicator(sp.Rational(3, 2))])
    assert sp.simplify(g0.integral() - sp.Rational(8, 3)) == 0
    env = fam.upper_envelope()
    assert sp.simplify(env.integral() - 4) == 0


# ---------------------------------------------------------------------------
# sector decompositions and special bases
# ---------------------------------------------------------------------------


def test_airy_sector_decomposition():
    dec = sector_decomposition(airy_catalogue())
    assert [sp.simplify(r) for r in dec.rays] == [-PI / 3, PI / 3, PI]
    assert dec.group_counts() == [3, 3, 3]
    # exactly one catalogue member is strictly lowest in each sector
    lows = [s.groups[0][1] for s in dec.sectors]
    assert lows == [("H1",), ("H0",), ("H2",)]
    mids = [s.groups[1][1] for s in dec.sectors]
    assert mids == [("G1",), ("G0",), ("G2", "G2b")]


def test_exp123_sector_decomposition():
    dec = sector_decomposition(exp123_catalogue())
    assert [sp.simplify(r) for r in dec.rays] == [-PI / 2, PI / 2, PI]
    orders = [tuple(g for _, g in s.groups) for s in dec.sectors]
    assert orders[0] == (("E2",), ("E1",), ("E0",))
    assert orders[1] == (("E0",), ("E1",), ("E2",))
    assert orders[2] == orders[0]


def test_special_basis_profile_rejects_bad_jumps():
    dec = sector_decomposition(exp123_catalogue())
    with pytest.raises(IndicatorError):
        special_basis_profile(dec, (2, 1), 3)  # wrong group count
    with pytest.raises(IndicatorError):
        special_basis_profile(dec, (1, 1, 2), 3)  # sums past the dimension
    prof = special_basis_profile(dec, (1, 1, 1), 3)
    assert prof.dim == 3 and len(prof.sectors) == 3


def test_profile_envelopes_sorted():
    dec = sector_decomposition(exp123_catalogue())
    prof = special_basis_profile(dec, (1, 1, 1), 3)
    envs = profile_envelopes(prof)
    assert len(envs) == 3
    assert sp.simplify(envs[0].integral() + 4) == 0   # min envelope
    assert sp.simplify(envs[1].integral()) == 0       # middle is cos
    assert sp.simplify(envs[2].integral() - 4) == 0   # upper envelope


# ---------------------------------------------------------------------------
# exact leading coefficients
# ---------------------------------------------------------------------------


def test_characteristic_and_flat_coefficients():
    dec = sector_decomposition(airy_catalogue())
    envs = profile_envelopes(special_basis_profile(dec, (1, 1, 1), 3))
    assert sp.simplify(characteristic_coefficient(envs[-1]) - 2 / PI) == 0
    mk = flat_proximity_coefficients(envs)
    assert sp.simplify(mk[0] - 4 / PI) == 0
    assert sp.simplify(mk[1] - 2 / PI) == 0


def test_wronskian_indicator_routes():
    # degree below the order: no contribution at the leading scale
    assert wronskian_indicator(Polynomial([QC(0), QC(1)]),
                               sp.Rational(3, 2)) == zero_indicator(
                                   sp.Rational(3, 2))
    h = wronskian_indicator(Polynomial([QC(0), QC(3)]), 1)
    assert h.arcs == (TrigArc(-PI, PI, 3, 0),)
    hc = wronskian_indicator(Polynomial([QC(0), QC(2, 1)]), 1)
    assert h.arcs[0].A == 3
    assert hc.arcs[0].A == 2 and hc.arcs[0].B == -1
    with pytest.raises(IndicatorError):
        wronskian_indicator(Polynomial([QC(0), QC(0), QC(1)]),
                            sp.Rational(3, 2))
    assert wronskian_indicator(Polynomial([QC(5)]), 1) == zero_indicator(1)


def test_airy_asymptotic_certificate():
    fam = airy_catalogue()
    dec = sector_decomposition(fam)
    prof = special_basis_profile(dec, (1, 1, 1), 3)
    cert = asymptotic_certificate(prof, zero_indicator(sp.Rational(3, 2)),
                                  members_for_m=fam.members)
    assert sp.simplify(cert.T_coeff - 2 / PI) == 0
    assert cert.N1_coeff == 0
    assert cert.balance_holds and cert.balance_residual == 0
    assert cert.lemma_identity_holds
    assert all(sp.simplify(ra) == 0 and sp.simplify(rb) == 0
               for _, _, ra, rb in cert.lemma_sector_residuals)
    for name in ("H0", "H1", "H2"):
        assert sp.simplify(cert.m_coeffs[name] - 4 / (3 * PI)) == 0
    for name in ("G0", "G1", "G2", "G2b"):
        assert sp.simplify(cert.m_coeffs[name] - 2 / (3 * PI)) == 0


def test_exp123_asymptotic_certificate():
    fam = exp123_catalogue()
    dec = sector_decomposition(fam)
    prof = special_basis_profile(dec, (1, 1, 1), 3)
    hw = wronskian_indicator(Polynomial([QC(0), QC(3)]), 1)
    cert = asymptotic_certificate(prof, hw, members_for_m=fam.members)
    assert sp.simplify(cert.T_coeff - 2 / PI) == 0
    assert sp.simplify(cert.mk_coeffs[0] - 4 / PI) == 0
    assert sp.simplify(cert.mk_coeffs[1] - 2 / PI) == 0
    assert cert.N1_coeff == 0
    assert cert.balance_holds and cert.lemma_identity_holds
    # every member ends a positive proportion below the top exponential
    assert sp.simplify(cert.m_coeffs["E0"] - 2 / PI) == 0
    assert sp.simplify(cert.m_coeffs["E1"] - 2 / PI) == 0
    assert sp.simplify(cert.m_coeffs["E2"] - 2 / PI) == 0


# ---------------------------------------------------------------------------
# admissible proximity sums
# ---------------------------------------------------------------------------


def test_classification_trichotomy():
    fam = airy_catalogue()
    assert classify_on_interval(fam["H0"], -PI / 3, PI / 3) == "negative"
    assert classify_on_interval(fam["G0"], -PI / 3, PI / 3) == "nonpositive"
    assert classify_on_interval(fam["H0"], PI / 3, PI) == "positive-somewhere"


def test_admissibility_violations_raise():
    fam = airy_catalogue()
    with pytest.raises(IndicatorError):
        admissible_sum(fam, ("H0", "H1", "H2"), AIRY_DEPENDENT_SETS)
    with pytest.raises(IndicatorError):
        admissible_sum(fam, ("H0", "H0"), AIRY_DEPENDENT_SETS)
    with pytest.raises(IndicatorError):
        # one strict plus two vanishing members overfill a hump
        admissible_sum(fam, ("H0", "G0", "G0"), AIRY_DEPENDENT_SETS)


def test_admissible_sum_values():
    fam = airy_catalogue()
    # each decaying member contributes 8/3, each positive part 4/3
    assert sp.simplify(
        admissible_sum(fam, ("H0",), AIRY_DEPENDENT_SETS) - sp.Rational(8, 3)
    ) == 0
    assert sp.simplify(
        admissible_sum(fam, ("G0", "G1"), AIRY_DEPENDENT_SETS)
        - sp.Rational(8, 3)
    ) == 0
    best = admissible_sum(fam, ("H1", "H2", "G0", "G0", "G1", "G2b"),
                          AIRY_DEPENDENT_SETS)
    assert sp.simplify(best - sp.Rational(32, 3)) == 0


def test_maximal_admissible_sum_airy():
    fam = airy_catalogue()
    best, sel = maximal_admissible_sum(fam, AIRY_DEPENDENT_SETS)
    assert sp.simplify(best - sp.Rational(32, 3)) == 0
    assert sorted(sel).count("G0") + sorted(sel).count("G1") >= 2
    assert sum(1 for nm in sel if nm.startswith("H")) == 2
    # the sharp constant: best / (2 pi T_coeff) equals 8/3 exactly
    T = 2 / PI
    assert sp.simplify(best / (2 * PI) - sp.Rational(8, 3) * T) == 0


def test_maximal_admissible_sum_exp123():
    best, sel = maximal_admissible_sum(exp123_catalogue())
    assert best == 24
    assert sel == ("E0", "E0", "E1", "E1", "E2", "E2")
