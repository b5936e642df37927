"""Cross-verification suites behind the `check` command.

Each suite exercises one identity or inequality on randomized inputs and
returns a summary record; a failing case is serialized into the replay
payload so it can be reproduced directly.  The suites are:

* distance product floor: prod_k d_k >= min over full-size admissible
  subsets of the hyperplane distance product, ratio >= 1 by construction
  of the flat distances (each flat projection dominates each of its
  member pairings);
* per-flat comparability: projection norm >= every member pairing
  (floor 1), with the measured upper constant recorded;
* counting routes: exact root route vs circle-average route on random
  polynomials;
* logarithmic derivative identity: d/dz log(W_j / W_n) equals
  W_{j,n} W / (W_j W_n) on random component triples;
* first-main-theorem constancy: m + N - T is radius-free per plane.
"""

from __future__ import annotations

import math

import numpy as np

from .entire import (
    Polynomial,
    PrecisionExhausted,
    log_wronskian_quotient_residual,
)
from .exactnum import QC
from .nevanlinna import (
    CurveAnalyzer,
    QuadratureSpec,
    counting_N,
)
from .projgeo import (
    FlatLattice,
    Hyperplane,
    HyperplaneSystem,
    SamplingGeometry,
)
from .scenarios import airy_scenario, exp123_scenario, staircase_scenario


def _unit_samples(rng, count, dim):
    z = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _random_system(rng, dim, q, name):
    planes = []
    for i in range(q):
        # rational entries keep the lattice exact-rank certified
        vec = [
            QC(int(rng.integers(-9, 10)), int(rng.integers(-9, 10)))
            for _ in range(dim)
        ]
        if all(x.is_zero for x in vec):
            vec[0] = QC(1)
        planes.append(Hyperplane(vec, name="p%d" % i))
    return HyperplaneSystem(planes, name=name)


def _check_systems(rng):
    out = []
    airy = airy_scenario()
    out.append(("airy-duals", airy.system))
    out.append(("exp123-coords", exp123_scenario().system))
    tries = 0
    while len(out) < 5 and tries < 50:
        tries += 1
        q = int(rng.integers(4, 7))
        sys_ = _random_system(rng, 3, q, "random-%d" % len(out))
        try:
            lattice = FlatLattice(sys_)
            if not lattice.complete() or not lattice.top_subsets:
                continue
        except Exception:
            continue
        out.append((sys_.name, sys_))
    return out


def lemma1_floor_suite(seed=1, samples=10_000):
    """Floor 1 for the distance product ratio, plus a sampling drift check."""
    rng = np.random.default_rng(seed)
    results = []
    failure = None
    for name, system in _check_systems(rng):
        lattice = FlatLattice(system)
        geom = SamplingGeometry.build(lattice, dps=60)
        W = _unit_samples(rng, samples, system.dim)
        ratios = geom.lemma1_ratios(W)
        W2 = _unit_samples(rng, 2 * samples, system.dim)
        ratios2 = geom.lemma1_ratios(W2)
        m1, m2 = float(ratios.min()), float(ratios2.min())
        drift = abs(math.log(max(m2, 1e-300) / max(m1, 1e-300)))
        ok = m1 >= 1.0 - 1e-9 and m2 >= 1.0 - 1e-9 and drift <= 0.10
        if not ok and failure is None:
            bad = int(np.argmin(ratios if m1 <= m2 else ratios2))
            src = W if m1 <= m2 else W2
            failure = {
                "suite": "distance-product-floor",
                "system": name,
                "sample": [[float(x.real), float(x.imag)] for x in src[bad]],
                "ratio": min(m1, m2),
            }
        results.append({
            "suite": "distance-product-floor",
            "case": name,
            "min_ratio": min(m1, m2),
            "drift": drift,
            "ok": ok,
        })
    return results, failure


def comparability_suite(seed=2, samples=10_000):
    """Projection norm >= member pairings per flat; record the upper constant.

    The upper constant divides the projection norm by the maximum member
    pairing; its sampled maximum is the comparability constant actually
    realized by the system.
    """
    rng = np.random.default_rng(seed)
    results = []
    failure = None
    for name, system in _check_systems(rng):
        lattice = FlatLattice(system)
        geom = SamplingGeometry.build(lattice, dps=60)
        W = _unit_samples(rng, samples, system.dim)
        hd = geom.hyperplane_dists(W)
        worst_floor = float("inf")
        measured_upper = 0.0
        for k, flats in sorted(lattice.flats.items()):
            dists = geom.flat_dists(W, k)
            for fi, flat in enumerate(flats):
                member = hd[:, list(flat.indices)].max(axis=1)
                ratio = dists[:, fi] / member
                worst_floor = min(worst_floor, float(ratio.min()))
                measured_upper = max(measured_upper, float(ratio.max()))
        ok = worst_floor >= 1.0 - 1e-9
        if not ok and failure is None:
            failure = {
                "suite": "comparability",
                "system": name,
                "floor": worst_floor,
            }
        results.append({
            "suite": "comparability",
            "case": name,
            "min_ratio": worst_floor,
            "measured_upper": measured_upper,
            "ok": ok,
        })
    return results, failure


def _random_poly(rng, max_deg=6):
    deg = int(rng.integers(1, max_deg + 1))
    coeffs = [
        QC(int(rng.integers(-5, 6)), int(rng.integers(-5, 6)))
        for _ in range(deg)
    ]
    lead = QC(int(rng.integers(1, 5)), int(rng.integers(-3, 4)))
    return Polynomial(coeffs + [lead])


def jensen_routes_suite(seed=3, cases=100):
    """Exact-root vs circle-average counting on random polynomials."""
    rng = np.random.default_rng(seed)
    spec = QuadratureSpec(tol=1e-6, prec=30)
    worst = 0.0
    failure = None
    checked = 0
    for i in range(cases):
        p = _random_poly(rng)
        if p.is_zero:
            continue
        r = float(rng.uniform(1.5, 20.0))
        try:
            res = counting_N(p, r, spec)
        except PrecisionExhausted:
            # a root essentially on the circle; step aside and retry once
            try:
                res = counting_N(p, 1.013 * r, spec)
            except PrecisionExhausted:
                continue
        gap = abs(res.jensen - res.step_mid)
        worst = max(worst, gap)
        checked += 1
        if gap > 10 * spec.tol and failure is None:
            failure = {
                "suite": "counting-routes",
                "poly": [[str(c.re), str(c.im)] for c in p.coeffs],
                "r": r,
                "gap": gap,
            }
    return [{
        "suite": "counting-routes",
        "case": "%d random polynomials" % checked,
        "max_residual": worst,
        "ok": failure is None,
    }], failure


def la_identity_suite(seed=4, cases=100, prec=30):
    """Logarithmic-derivative determinant identity on random triples."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    failure = None
    tol = 10.0 ** (-prec / 2)
    checked = 0
    for i in range(cases):
        fns = [_random_poly(rng, max_deg=4) for _ in range(3)]
        z = complex(rng.uniform(0.3, 1.5), rng.uniform(-1.0, 1.0))
        j = int(rng.integers(0, 2))
        try:
            resid = log_wronskian_quotient_residual(fns, z, j=j, prec=prec)
        except ZeroDivisionError:
            continue
        resid = float(resid)
        if not math.isfinite(resid):
            continue
        worst = max(worst, resid)
        checked += 1
        if resid > tol and failure is None:
            failure = {
                "suite": "log-derivative-identity",
                "polys": [[[str(c.re), str(c.im)] for c in f.coeffs]
                          for f in fns],
                "z": [z.real, z.imag],
                "j": j,
                "residual": resid,
            }
    return [{
        "suite": "log-derivative-identity",
        "case": "%d random triples" % checked,
        "max_residual": worst,
        "ok": failure is None,
    }], failure


def fmt_suite(seed=5):
    """m + N - T is the same at every certified radius, per plane."""
    results = []
    failure = None
    jobs = []
    for s in (seed, seed + 1, seed + 2):
        sc = staircase_scenario(seed=20_000 + 7 * s)
        jobs.append((sc.curve.label, sc))
    line = staircase_scenario(seed=0)
    # replace the curve with the simplest possible one: (1 : z : z^2)
    from .entire import HolomorphicCurve

    line.curve = HolomorphicCurve(
        [Polynomial([QC(1)]), Polynomial([QC(0), QC(1)]),
         Polynomial([QC(0), QC(0), QC(1)])],
        label="rational-normal",
    )
    jobs.append((line.curve.label, line))
    for label, sc in jobs:
        spec = QuadratureSpec(tol=1e-6, prec=30)
        analyzer = CurveAnalyzer(sc.curve, sc.system, spec)
        radii = (3.0, 9.0, 27.0, 81.0)
        per_plane = {name: [] for name in sc.system.names()}
        ok = True
        for r in radii:
            row = analyzer.analyze_radius(r)
            if not row.certified:
                ok = False
                continue
            for name in per_plane:
                per_plane[name].append(row.m[name] + row.N[name] - row.T)
        spans = [max(v) - min(v) for v in per_plane.values() if len(v) >= 2]
        variation = max(spans) if spans else float("inf")
        ok = ok and variation <= 10 * spec.tol
        if not ok and failure is None:
            failure = {
                "suite": "fmt-constancy",
                "curve": label,
                "variation": variation,
            }
        results.append({
            "suite": "fmt-constancy",
            "case": label,
            "max_residual": variation,
            "ok": ok,
        })
    return results, failure


def run_all(seed=1, samples=10_000):
    """All suites; returns (all_ok, rows, first_failure_or_None)."""
    rows = []
    failure = None
    for fn, kwargs in (
        (lemma1_floor_suite, {"seed": seed, "samples": samples}),
        (comparability_suite, {"seed": seed + 1, "samples": samples}),
        (jensen_routes_suite, {"seed": seed + 2}),
        (la_identity_suite, {"seed": seed + 3}),
        (fmt_suite, {"seed": seed + 4}),
    ):
        part, fail = fn(**kwargs)
        rows.extend(part)
        if failure is None:
            failure = fail
    return all(r["ok"] for r in rows), rows, failure
