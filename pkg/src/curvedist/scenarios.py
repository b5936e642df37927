"""Built-in study scenarios: curves, dual systems, grids, exact catalogues.

Three families ship:

* ``airy``: the order-3/2 curve whose components solve y''' = (9/4)(zy' + y)
  with identity initial data.  The equation is satisfied by u(z) = Ai(mu z)
  and by v(z) = Gi(mu z) for every cube root mu of 9/4 (the inhomogeneous
  constant in the Scorer equation dies under the extra derivative), so the
  seven shipped dual vectors pair the curve with those classical functions.
  The scaling mu = (3/2)^(2/3) makes every indicator a unit-coefficient
  cosine in 3 theta/2 and the characteristic coefficient exactly 2/pi.
* ``exp123``: (1 : e^z : e^(2z)), order 1, where everything is elementary
  and the Cartan inequality is an exact equality.
* ``poly-staircase``: seeded random polynomial curves with strictly
  increasing component degrees; all slopes are integers known in advance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .entire import HolomorphicCurve, LinearODE, OdeSolution, Polynomial, \
    ExpPolynomial
from .exactnum import QC, ExactConstant
from .indicator import (
    AIRY_DEPENDENT_SETS,
    IndicatorFamily,
    PiecewiseIndicator,
    airy_catalogue,
    exp123_catalogue,
    wronskian_indicator,
    zero_indicator,
)
from .nevanlinna import QuadratureSpec, RadialGrid
from .projgeo import Hyperplane, HyperplaneSystem


@dataclass
class Scenario:
    name: str
    curve: HolomorphicCurve
    system: HyperplaneSystem
    grid: RadialGrid
    quad: QuadratureSpec
    admissible_sets: dict = field(default_factory=dict)
    family: IndicatorFamily = None
    h_wronskian: PiecewiseIndicator = None
    jumps: tuple = None
    dependent_sets: tuple = ()
    notes: str = ""


# ---------------------------------------------------------------------------
# order-3/2 scenario
# ---------------------------------------------------------------------------


def _lam():
    return mp.power(mp.mpf(3) / 2, mp.mpf(2) / 3)


def _gi0():
    # Gi(0) = Bi(0)/3 = 1 / (3^(7/6) Gamma(2/3))
    return 1 / (mp.power(3, mp.mpf(7) / 6) * mp.gamma(mp.mpf(2) / 3))


def _gip0():
    # Gi'(0) = Bi'(0)/3 = 1 / (3^(5/6) Gamma(1/3))
    return 1 / (mp.power(3, mp.mpf(5) / 6) * mp.gamma(mp.mpf(1) / 3))


def _airy_ode():
    nine_quarters = QC(Fraction(9, 4))
    return LinearODE([
        Polynomial([nine_quarters]),          # coefficient of y
        Polynomial([QC(0), nine_quarters]),   # coefficient of y'
        Polynomial([]),                       # coefficient of y''
    ])


def _dual_h(j):
    """Dual vector whose section is Ai(lam * omega^j * z), omega = e^(2pi i/3).

    The section's initial data is (Ai(0), lam omega^j Ai'(0), 0); the pairing
    conjugates the vector, so the stored entries carry omega^(-j).
    """
    return [
        ExactConstant(lambda: mp.airyai(0), "Ai(0)"),
        ExactConstant(
            lambda j=j: _lam() * mp.expjpi(mp.mpf(-2 * j) / 3)
            * mp.airyai(0, derivative=1),
            "lam*omega^-%d*Ai'(0)" % j,
        ),
        QC(0),
    ]


def _dual_g(j):
    """Dual vector whose section is Gi(lam * omega^j * z)."""
    return [
        ExactConstant(_gi0, "Gi(0)"),
        ExactConstant(
            lambda j=j: _lam() * mp.expjpi(mp.mpf(-2 * j) / 3) * _gip0(),
            "lam*omega^-%d*Gi'(0)" % j,
        ),
        ExactConstant(
            lambda j=j: _lam() ** 2 * mp.expjpi(mp.mpf(-4 * j) / 3)
            * (-1 / mp.pi),
            "lam^2*omega^-%d*Gi''(0)" % j,
        ),
    ]


def _dual_g2b():
    """Componentwise sum of the H2 and G2 duals: same indicator as G2."""
    return [
        ExactConstant(lambda: mp.airyai(0) + _gi0(), "Ai(0)+Gi(0)"),
        ExactConstant(
            lambda: _lam() * mp.expjpi(mp.mpf(-4) / 3)
            * (mp.airyai(0, derivative=1) + _gip0()),
            "lam*omega^-2*(Ai'(0)+Gi'(0))",
        ),
        ExactConstant(
            lambda: _lam() ** 2 * mp.expjpi(mp.mpf(-8) / 3) * (-1 / mp.pi),
            "lam^2*omega^-4*Gi''(0)",
        ),
    ]


def airy_scenario():
    ode = _airy_ode()
    comps = []
    for j in range(3):
        data = [QC(1) if k == j else QC(0) for k in range(3)]
        comps.append(OdeSolution(ode, data, label="f%d" % j))
    curve = HolomorphicCurve(comps, label="airy")
    planes = [
        Hyperplane(_dual_h(0), name="H0"),
        Hyperplane(_dual_h(1), name="H1"),
        Hyperplane(_dual_h(2), name="H2"),
        Hyperplane(_dual_g(0), name="G0"),
        Hyperplane(_dual_g(1), name="G1"),
        Hyperplane(_dual_g(2), name="G2"),
        Hyperplane(_dual_g2b(), name="G2b"),
    ]
    system = HyperplaneSystem(planes, name="airy-duals")
    family = airy_catalogue()
    return Scenario(
        name="airy",
        curve=curve,
        system=system,
        grid=RadialGrid((36.0, 40.0, 45.0, 50.0)),
        quad=QuadratureSpec(tol=5e-3, prec=60),
        admissible_sets={
            "max6": ("H0", "G0", "H1", "G1", "G2", "G2b"),
            "triple": ("H0", "G1", "G2"),
            "gquad": ("G0", "G1", "G2", "G2b"),
        },
        family=family,
        h_wronskian=zero_indicator(family.rho),
        jumps=(1, 1, 1),
        dependent_sets=AIRY_DEPENDENT_SETS,
        notes="full system is inadmissible (H0,H1,H2 span a plane pencil); "
              "Cartan sums are reported on the named admissible subsets",
    )


# ---------------------------------------------------------------------------
# exponential scenario
# ---------------------------------------------------------------------------


def exp123_scenario():
    comps = [
        ExpPolynomial({QC(0): Polynomial([QC(1)])}),
        ExpPolynomial({QC(1): Polynomial([QC(1)])}),
        ExpPolynomial({QC(2): Polynomial([QC(1)])}),
    ]
    curve = HolomorphicCurve(comps, label="exp123")
    planes = []
    for j in range(3):
        v = [QC(0)] * 3
        v[j] = QC(1)
        planes.append(Hyperplane(v, name="E%d" % j))
    system = HyperplaneSystem(planes, name="exp123-coords")
    family = exp123_catalogue()
    return Scenario(
        name="exp123",
        curve=curve,
        system=system,
        grid=RadialGrid(
            # keep r = 50 on the grid for the defect readout; the two extra
            # radii push T high enough that the deficit ratio clears 5%
            RadialGrid.log_spaced(2.0, 50.0, 12).radii + (61.0, 74.0)
        ),
        quad=QuadratureSpec(tol=1e-3, prec=30),
        admissible_sets={"coords": ("E0", "E1", "E2")},
        family=family,
        h_wronskian=wronskian_indicator(
            Polynomial([QC(0), QC(3)]), family.rho
        ),
        jumps=(1, 1, 1),
        dependent_sets=(),
        notes="Cartan defect relation is an exact equality here",
    )


# ---------------------------------------------------------------------------
# seeded polynomial staircases
# ---------------------------------------------------------------------------


def staircase_curve(seed):
    """Random curve with strictly increasing component degrees <= 6.

    The Wronskian's leading coefficient is a Vandermonde product over the
    distinct degrees times the leading coefficients, hence never zero; a
    common factor is ruled out by an exact gcd check (resampling until the
    gcd is constant).
    """
    rng = random.Random(seed)
    for _ in range(200):
        degs = sorted(rng.sample(range(0, 7), 3))
        polys = []
        for d in degs:
            coeffs = [QC(rng.randint(-5, 5)) for _ in range(d)]
            lead = rng.choice([x for x in range(-5, 6) if x])
            coeffs.append(QC(lead))
            polys.append(Polynomial(coeffs))
        g = polys[0].gcd(polys[1]).gcd(polys[2])
        if g.degree == 0:
            return HolomorphicCurve(
                polys, label="staircase-%d" % seed
            ), tuple(degs)
    raise RuntimeError("staircase sampling failed for seed %d" % seed)


def staircase_scenario(seed=20250819):
    curve, degs = staircase_curve(seed)
    planes = []
    for j in range(3):
        v = [QC(0)] * 3
        v[j] = QC(1)
        planes.append(Hyperplane(v, name="e%d" % j))
    system = HyperplaneSystem(planes, name="coordinates")
    return Scenario(
        name="poly-staircase",
        curve=curve,
        system=system,
        grid=RadialGrid(RadialGrid.log_spaced(1e2, 1e4, 12).radii),
        quad=QuadratureSpec(tol=1e-3, prec=30),
        admissible_sets={"coords": ("e0", "e1", "e2")},
        family=None,
        h_wronskian=None,
        jumps=None,
        dependent_sets=(),
        notes="degrees %s; all asymptotic slopes are integers" % (degs,),
    )


BUILTIN = {
    "airy": airy_scenario,
    "exp123": exp123_scenario,
    "poly-staircase": staircase_scenario,
}


def get_builtin(name, **kwargs):
    try:
        factory = BUILTIN[name]
    except KeyError:
        raise KeyError(
            "unknown scenario %r (available: %s)"
            % (name, ", ".join(sorted(BUILTIN)))
        ) from None
    return factory(**kwargs)
