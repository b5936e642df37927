"""Finite-radius value distribution with certified error accounting.

Circle integrals use the trapezoid rule on uniform nodes (exact mean of node
values, since the integrands are 2-pi periodic) with dyadic refinement; the
certified quadrature error of a converged integral is the last refinement
difference.  Node values come from `entire` circle blocks that carry
absolute error bounds, and every consumer escalates working precision until
each needed value clears its own bound with margin; integrands built from
quantities as small as e^(-2 r^(3/2)) are meaningless without that loop.

Radii whose circles pass near a zero of a relevant section are moved by up
to 1 percent (recorded in the row): a two-sided annulus winding count
certifies that no zero sits within the resolution band.  Counting functions
are computed along two routes (step integral over located zeros or a
log-spaced grid of certified winding counts, against the circle-average
route through the vanishing order at the origin) and rows where the routes
disagree beyond their documented bands are flagged, never silently kept.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import mpmath as mp

from .entire import (
    CircleBlock,
    CurveError,
    ExpPolynomial,
    HolomorphicCurve,
    OdeSolution,
    Polynomial,
    PrecisionExhausted,
    ZeroFreeExp,
    _complex_det,
    shared_equation,
    workdps,
    wronskian_vanishing_order,
)
from .exactnum import QC, ExactConstant
from .projgeo import FlatLattice, GeometryError, Hyperplane, HyperplaneSystem

WINDING_STEP_LIMIT = 1.55  # adjacent-node argument increments must stay below


@dataclass(frozen=True)
class QuadratureSpec:
    """Numerical policy: tolerances, node budgets, escalation, nudging."""

    tol: float = 1e-6          # absolute tolerance per circle integral
    prec: int = 30             # working digits for reported quantities
    n0: int = 128              # first node count (power of two)
    n_max: int = 1 << 14       # node budget per integral
    nudge_delta: float = 0.005  # relative half-width of the resolution band
    nudge_steps: tuple = (0.0, 0.0025, -0.0025, 0.005, -0.005,
                          0.0075, -0.0075, 0.01, -0.01)
    escalation_rounds: int = 6
    zero_grid_points: int = 16  # log-grid resolution of the zero-count route

    def dps_ladder(self):
        base = max(self.prec + 25, 35)
        out = [base]
        for k in range(self.escalation_rounds):
            out.append(base + 40 * (2 ** (k + 1) - 1))
        return out

    def node_rel(self):
        """Relative accuracy required of each node value."""
        return min(1e-8, self.tol * 1e-2)


@dataclass(frozen=True)
class RadialGrid:
    radii: tuple

    @classmethod
    def log_spaced(cls, rmin, rmax, count):
        if count < 1 or rmin <= 0 or rmax < rmin:
            raise ValueError("bad radial grid parameters")
        if count == 1:
            return cls((float(rmax),))
        lo, hi = math.log(rmin), math.log(rmax)
        return cls(tuple(
            math.exp(lo + (hi - lo) * i / (count - 1)) for i in range(count)
        ))


@dataclass
class ReportRow:
    r_requested: float
    r_used: float
    nudged: bool
    T: float = 0.0
    m: dict = field(default_factory=dict)
    m_k: list = field(default_factory=list)
    n_counts: dict = field(default_factory=dict)
    N: dict = field(default_factory=dict)
    N1: float = 0.0
    S_thm1: float = 0.0
    S_cartan: float = None
    prop_gap: float = None
    certified: bool = True
    flags: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def flag(self, reason):
        self.certified = False
        if reason not in self.flags:
            self.flags.append(reason)

    @property
    def status(self):
        return "certified" if self.certified else "flagged:" + "|".join(self.flags)


@dataclass
class AnalysisReport:
    curve_label: str
    system_name: str
    spec: QuadratureSpec
    plane_names: list
    dim: int
    rows: list = field(default_factory=list)
    invariant_violations: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def certified_rows(self):
        return [row for row in self.rows if row.certified]

    def validate(self):
        """Cross-radius invariants; failures are recorded, not raised."""
        out = []
        rows = self.certified_rows()
        tol10 = 10 * self.spec.tol
        for a, b in zip(rows, rows[1:]):
            if b.T < a.T - tol10:
                out.append("characteristic decreased between r=%g and r=%g"
                           % (a.r_used, b.r_used))
            for name in self.plane_names:
                if b.N[name] < a.N[name] - tol10:
                    out.append("counting function N(%s) decreased at r=%g"
                               % (name, b.r_used))
                if b.n_counts[name] < a.n_counts[name]:
                    out.append("zero count n(%s) decreased at r=%g"
                               % (name, b.r_used))
        for row in rows:
            for name, v in row.m.items():
                if v < -tol10:
                    out.append("negative proximity m(%s) at r=%g"
                               % (name, row.r_used))
            for k in range(1, len(row.m_k)):
                if row.m_k[k] > row.m_k[k - 1] + tol10:
                    out.append("flat proximity ordering violated at r=%g"
                               % row.r_used)
        for name in self.plane_names:
            vals = [row.m[name] + row.N[name] - row.T for row in rows]
            if vals and max(vals) - min(vals) > tol10:
                out.append(
                    "first-main-theorem combination for %s varies by %.3g"
                    % (name, max(vals) - min(vals))
                )
        if rows:
            top = rows[-1]
            # S_thm1 = dim*T - sum m_k - N1; a strongly negative value means
            # the proximity side overshoots dim*T beyond the allowed slack
            if -top.S_thm1 > 0.05 * self.dim * top.T:
                out.append("main inequality slack above threshold at the "
                           "top certified radius")
        self.invariant_violations = out
        return out


@dataclass
class CountingResult:
    value: float
    count: int
    jensen: float
    step_mid: float
    band: float
    routes_agree: bool
    route: str


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


def _combine_scalars(weights, scalars):
    """Σ w_j s_j as QC when everything is exact, else a lazy constant."""
    if all(isinstance(w, QC) for w in weights) and all(
        isinstance(s, QC) for s in scalars
    ):
        acc = QC(0)
        for w, s in zip(weights, scalars):
            acc = acc + w * s
        return acc

    def factory(weights=tuple(weights), scalars=tuple(scalars)):
        acc = mp.mpc(0)
        for w, s in zip(weights, scalars):
            acc += w.to_mpc() * s.to_mpc()
        return acc

    return ExactConstant(factory, "combined-initial-datum")


class _GenericSection:
    """Fallback pairing <alpha, f> for mixed component types."""

    def __init__(self, components, weights, label):
        self.components = tuple(components)
        self.weights = tuple(weights)
        self.label = label

    def eval(self, z, deriv=0, prec=30):
        with workdps(prec + 10):
            acc = mp.mpc(0)
            for w, f in zip(self.weights, self.components):
                acc += w.to_mpc() * f.eval(z, deriv=deriv, prec=prec)
            return acc

    def circle_block(self, r, n, deriv=0, dps=30, floor_abs=None):
        blocks = [
            f.circle_block(r, n, deriv=deriv, dps=dps, floor_abs=floor_abs)
            for f in self.components
        ]
        with workdps(dps):
            ws = [w.to_mpc() for w in self.weights]
            values = []
            for k in range(n):
                acc = mp.mpc(0)
                for w, b in zip(ws, blocks):
                    acc += w * b.values[k]
                values.append(acc)
            err = sum(
                (abs(w) * b.err for w, b in zip(ws, blocks)), mp.mpf(0)
            )
            return CircleBlock(mp.mpf(r), n, deriv, dps, values, err)

    def exact_taylor(self, M):
        if not all(isinstance(w, QC) for w in self.weights):
            return None
        out = [QC(0)] * (M + 1)
        for w, f in zip(self.weights, self.components):
            ser = f.exact_taylor(M) if hasattr(f, "exact_taylor") else None
            if ser is None:
                return None
            for m in range(M + 1):
                out[m] = out[m] + w * ser[m]
        return out

    def vanishing_order(self, prec=40):
        ser = self.exact_taylor(64)
        if ser is not None:
            for m, c in enumerate(ser):
                if not c.is_zero:
                    return m, c
            raise PrecisionExhausted("vanishing order beyond series budget")
        with workdps(prec):
            probes = 64
            vals = []
            for m in range(probes):
                acc = mp.mpc(0)
                for w, f in zip(self.weights, self.components):
                    if isinstance(f, OdeSolution):
                        a = f._grow_mpc(probes, prec)
                        acc += w.to_mpc() * a[m]
                    else:
                        ex = f.exact_taylor(probes)
                        acc += w.to_mpc() * ex[m].to_mpc()
                vals.append(acc)
            scale = max(abs(v) for v in vals)
            thresh = scale * mp.power(10, -prec + 12)
            for m, v in enumerate(vals):
                if abs(v) > thresh:
                    return m, +v
        raise PrecisionExhausted("vanishing order beyond series budget")

    def is_zero_free(self):
        return None

    def key(self):
        return ("section", self.label)


def section_function(curve: HolomorphicCurve, plane: Hyperplane):
    """The section g = <alpha, f> in the richest representation available."""
    weights = plane.section_data()
    comps = curve.components
    if all(isinstance(f, Polynomial) for f in comps) and all(
        isinstance(w, QC) for w in weights
    ):
        acc = Polynomial()
        for w, f in zip(weights, comps):
            acc = acc + f * w
        if acc.is_zero:
            raise CurveError("curve image lies in hyperplane %s" % plane.name)
        return acc
    if all(isinstance(f, (Polynomial, ExpPolynomial)) for f in comps) and all(
        isinstance(w, QC) for w in weights
    ):
        acc = ExpPolynomial({})
        for w, f in zip(weights, comps):
            if isinstance(f, Polynomial):
                f = ExpPolynomial({QC(0): f})
            acc = acc + f * ExpPolynomial({QC(0): Polynomial([w])})
        if acc.is_zero:
            raise CurveError("curve image lies in hyperplane %s" % plane.name)
        return acc
    ode = shared_equation(comps)
    if ode is not None:
        data = []
        for k in range(ode.order):
            data.append(_combine_scalars(weights, [f.data[k] for f in comps]))
        return OdeSolution(ode, data, label="section-%s" % plane.name)
    return _GenericSection(comps, weights, "section-%s" % plane.name)


# ---------------------------------------------------------------------------
# analyzer
# ---------------------------------------------------------------------------


class _RadiusCache:
    """Blocks and derived node data for one exact radius value."""

    def __init__(self, analyzer, r):
        self.analyzer = analyzer
        self.r = float(r)
        self.comp = {}
        self.sect = {}
        self.norm = {}
        self.flatnum = {}

    def comp_block(self, idx, n, dps, deriv=0):
        key = (idx, n, dps, deriv)
        block = self.comp.get(key)
        if block is None:
            block = self.analyzer.curve.components[idx].circle_block(
                self.r, n, deriv=deriv, dps=dps
            )
            self.comp[key] = block
        return block

    def section_block(self, name, n, dps):
        key = (name, n, dps)
        block = self.sect.get(key)
        if block is None:
            block = self.analyzer.sections[name].circle_block(
                self.r, n, dps=dps
            )
            self.sect[key] = block
        return block

    def norm_values(self, n, dps):
        """(norm per node, log norm per node, abs error of component values)."""
        key = (n, dps)
        out = self.norm.get(key)
        if out is None:
            blocks = [
                self.comp_block(i, n, dps)
                for i in range(len(self.analyzer.curve.components))
            ]
            with workdps(dps):
                err = sum((b.err for b in blocks), mp.mpf(0))
                norms = []
                logs = []
                for k in range(n):
                    acc = mp.mpf(0)
                    for b in blocks:
                        acc += abs(b.values[k]) ** 2
                    v = mp.sqrt(acc)
                    norms.append(v)
                    logs.append(mp.log(v))
                out = (norms, logs, err)
            self.norm[key] = out
        return out

    def flat_numerators(self, flat, n, dps):
        key = (flat.signature(), n, dps)
        out = self.flatnum.get(key)
        if out is None:
            blocks = [
                self.comp_block(i, n, dps)
                for i in range(len(self.analyzer.curve.components))
            ]
            onb = flat.onb(dps)
            with workdps(dps):
                vals = []
                for k in range(n):
                    acc = mp.mpf(0)
                    for u in onb:
                        ip = mp.mpc(0)
                        for uj, b in zip(u, blocks):
                            ip += mp.conj(uj) * b.values[k]
                        acc += abs(ip) ** 2
                    vals.append(mp.sqrt(acc))
                err = sum((b.err for b in blocks), mp.mpf(0))
                err *= mp.sqrt(len(onb))
                out = (vals, err)
            self.flatnum[key] = out
        return out


class CurveAnalyzer:
    """Joint numerical analysis of one curve against one hyperplane system."""

    def __init__(self, curve: HolomorphicCurve, system: HyperplaneSystem,
                 spec: QuadratureSpec = QuadratureSpec(), lattice=None):
        if system.dim != curve.n + 1:
            raise GeometryError("system dimension does not match the curve")
        self.curve = curve
        self.system = system
        self.spec = spec
        self.lattice = lattice if lattice is not None else FlatLattice(system)
        if not self.lattice.complete():
            raise GeometryError("flat lattice misses a codimension; the "
                                "system cannot drive the main inequality")
        self.sections = {
            p.name: section_function(curve, p) for p in system.planes
        }
        self.wronskian = curve.wronskian()
        self._caches = {}
        self._zero_pool = {}   # section name -> {t: count}
        self._origin = {}

    # -- plumbing -----------------------------------------------------------

    def cache(self, r) -> _RadiusCache:
        key = repr(float(r))
        c = self._caches.get(key)
        if c is None:
            c = _RadiusCache(self, r)
            self._caches[key] = c
        return c

    def drop_cache(self, r):
        self._caches.pop(repr(float(r)), None)

    def _origin_data(self, name):
        out = self._origin.get(name)
        if out is None:
            fn = self.sections[name]
            if isinstance(fn, (Polynomial, ExpPolynomial)):
                ordm, lead = fn.vanishing_order()
            else:
                ordm, lead = fn.vanishing_order(prec=self.spec.prec + 20)
            with workdps(self.spec.prec + 20):
                lead_mag = abs(lead.to_mpc()) if isinstance(lead, QC) else abs(lead)
                out = (ordm, mp.log(lead_mag))
            self._origin[name] = out
        return out

    # -- certified node data -------------------------------------------------

    def _certified_section(self, name, r, n):
        """Section block whose every node clears its error bound."""
        rel = self.spec.node_rel()
        cache = self.cache(r)
        last = None
        for dps in self.spec.dps_ladder():
            block = cache.section_block(name, n, dps)
            last = block
            with workdps(dps):
                if block.err == 0:
                    return block
                bad = any(abs(v) * rel < block.err for v in block.values)
            if not bad:
                return block
        raise PrecisionExhausted(
            "section %s at r=%g: node values below certified error after "
            "escalation" % (name, r)
        )

    def _certified_norm(self, r, n):
        rel = self.spec.node_rel()
        cache = self.cache(r)
        for dps in self.spec.dps_ladder():
            norms, logs, err = cache.norm_values(n, dps)
            with workdps(dps):
                if err == 0 or all(v * rel >= err for v in norms):
                    return norms, logs, err, dps
        raise PrecisionExhausted("curve norm uncertified at r=%g" % r)

    def _certified_dk(self, k, r, n):
        """Per-node log(1/d_k) with certified minimum numerators."""
        rel = self.spec.node_rel()
        cache = self.cache(r)
        if k == self.curve.n + 1:
            return [mp.mpf(0)] * n
        flats = self.lattice.codim_flats(k)
        for dps in self.spec.dps_ladder():
            norms, logs, nerr = cache.norm_values(n, dps)
            with workdps(dps):
                per_flat = [cache.flat_numerators(f, n, dps) for f in flats]
                mins = []
                ok = True
                for node in range(n):
                    best, besterr = None, None
                    for vals, err in per_flat:
                        if best is None or vals[node] < best:
                            best, besterr = vals[node], err
                    if best * rel < besterr or norms[node] * rel < nerr:
                        ok = False
                        break
                    mins.append(best)
                if ok:
                    return [
                        logs[node] - mp.log(mins[node]) for node in range(n)
                    ]
        raise PrecisionExhausted(
            "flat distance d_%d uncertified at r=%g" % (k, r)
        )

    # -- quadrature -----------------------------------------------------------

    def _refine_mean(self, node_fn, label, row=None):
        """Dyadic refinement of the periodic trapezoid mean of node_fn(n)."""
        spec = self.spec
        n = spec.n0
        prev = None
        while n <= spec.n_max:
            try:
                values = node_fn(n)
            except PrecisionExhausted as exc:
                if row is not None:
                    row.flag("precision-exhausted:%s" % label)
                    return mp.mpf(0), mp.mpf("inf"), n
                raise
            with workdps(spec.prec + 25):
                cur = mp.fsum(values) / n
            if prev is not None and abs(cur - prev) <= spec.tol:
                return cur, abs(cur - prev) + 10 * spec.node_rel(), n
            prev = cur
            n *= 2
        if row is not None:
            row.flag("quadrature-budget:%s" % label)
            return prev, mp.mpf("inf"), n // 2
        raise PrecisionExhausted("quadrature budget exhausted for " + label)

    # -- windings and zero counts ----------------------------------------------

    def _winding_of_block(self, block):
        with workdps(block.dps):
            rel = 1e-3
            if block.err != 0 and any(
                abs(v) * rel < block.err for v in block.values
            ):
                return None
            args = [mp.arg(v) for v in block.values]
        total = 0.0
        two_pi = 2 * math.pi
        prev = float(args[0])
        for a in list(args[1:]) + [args[0]]:
            d = float(a) - prev
            while d > math.pi:
                d -= two_pi
            while d <= -math.pi:
                d += two_pi
            if abs(d) > WINDING_STEP_LIMIT:
                return None
            total += d
            prev = float(a)
        w = total / two_pi
        k = round(w)
        if abs(w - k) > 0.02:
            return None
        return int(k)

    def count_zeros_fn(self, fn, t, name=None):
        """Certified number of zeros of fn in |z| < t (winding route)."""
        spec = self.spec
        n = 256
        while n <= 1 << 13:
            for dps in spec.dps_ladder():
                try:
                    block = fn.circle_block(t, n, dps=dps)
                except PrecisionExhausted:
                    break
                w = self._winding_of_block(block)
                if w is not None:
                    return w
                with workdps(dps):
                    fine = block.err == 0 or all(
                        abs(v) * 1e-3 >= block.err for v in block.values
                    )
                if fine:
                    break  # values certified, arcs too coarse: refine nodes
            n *= 2
        raise PrecisionExhausted(
            "winding count uncertified for %s at t=%g" % (name or "function", t)
        )

    def _count_with_retry(self, fn, t, name):
        """Winding count with tiny radius perturbations near zeros."""
        delta = self.spec.nudge_delta
        for u in (0.0, 0.5 * delta, -0.5 * delta, delta, -delta):
            try:
                return t * (1 + u), self.count_zeros_fn(fn, t * (1 + u), name)
            except PrecisionExhausted:
                continue
        raise PrecisionExhausted("no certified count near t=%g for %s"
                                 % (t, name))

    def _zero_counts(self, name, fn, r_hi, count_hi, ord0):
        """Log-spaced certified counts below r_hi, shared across radii."""
        pool = self._zero_pool.setdefault(name, {})
        pool[r_hi] = count_hi
        if count_hi == ord0:
            return [(r_hi, count_hi)]
        t_lo = None
        for t, c in sorted(pool.items()):
            if c == ord0:
                t_lo = t  # any certified radius with no extra zeros below
        if t_lo is None:
            t = r_hi / 8
            while True:
                t_used, c = self._count_with_retry(fn, t, name)
                pool[t_used] = c
                if c == ord0:
                    t_lo = t_used
                    break
                t /= 8
                if t < 1e-8 * r_hi:
                    raise PrecisionExhausted(
                        "cannot isolate the zero-free core for %s" % name
                    )
        gap = math.log(r_hi / t_lo) / self.spec.zero_grid_points
        pts = sorted(t for t in pool if t_lo <= t <= r_hi)
        filled = True
        while filled:
            filled = False
            for a, b in zip(pts, pts[1:]):
                if math.log(b / a) > 1.5 * gap:
                    t_new = math.sqrt(a * b)
                    t_used, c = self._count_with_retry(fn, t_new, name)
                    pool[t_used] = c
                    pts = sorted(t for t in pool if t_lo <= t <= r_hi)
                    filled = True
                    break
        return [(t, pool[t]) for t in pts]

    # -- per-quantity computations ----------------------------------------------

    def characteristic(self, r, row=None):
        def nodes(n):
            _, logs, _, _ = self._certified_norm(r, n)
            return logs

        mean, err, _ = self._refine_mean(nodes, "characteristic", row)
        with workdps(self.spec.prec + 20):
            w0 = self.curve.value_at_origin(self.spec.prec + 10)
            norm0 = mp.sqrt(sum((abs(x) ** 2 for x in w0), mp.mpf(0)))
            return mean - mp.log(norm0), err

    def proximity_m(self, name, r, row=None):
        """(m(r,a), err, circle mean of log|g|) sharing one node sweep."""
        spec = self.spec
        g_mean_hold = {}

        def nodes(n):
            _, logs, _, dps = self._certified_norm(r, n)
            block = self._certified_section(name, r, n)
            with workdps(max(dps, block.dps)):
                glogs = [mp.log(abs(v)) for v in block.values]
                g_mean_hold[n] = mp.fsum(glogs) / n
                return [logs[k] - glogs[k] for k in range(n)]

        mean, err, n_used = self._refine_mean(nodes, "proximity-" + name, row)
        with workdps(spec.prec + 20):
            log_alpha = mp.log(self.system[name].norm(spec.prec + 20))
            value = mean + log_alpha
            if value < 0:
                if value >= -err - 10 * spec.tol:
                    value = mp.mpf(0)
                elif row is not None:
                    row.flag("negative-proximity-" + name)
            return value, err, g_mean_hold.get(n_used)

    def flat_proximity(self, k, r, row=None):
        def nodes(n):
            return self._certified_dk(k, r, n)

        mean, err, _ = self._refine_mean(nodes, "flat-proximity-%d" % k, row)
        return mean, err

    def counting(self, name, r_used, count_at_r, row=None):
        """Counting function by the route fitting the section, cross-checked."""
        spec = self.spec
        fn = self.sections[name]
        ord0, log_lead = self._origin_data(name)
        tol10 = 10 * spec.tol

        def nodes(n):
            block = self._certified_section(name, r_used, n)
            with workdps(block.dps):
                return [mp.log(abs(v)) for v in block.values]

        gmean, gerr, _ = self._refine_mean(nodes, "jensen-" + name, row)
        with workdps(spec.prec + 20):
            jensen = gmean - log_lead

        if isinstance(fn, Polynomial):
            roots = fn.roots(prec=spec.prec + 10)
            with workdps(spec.prec + 20):
                rr = mp.mpf(r_used)
                exact = ord0 * mp.log(rr)
                cnt = ord0
                for z in roots:
                    az = abs(z)
                    if az == 0 or az > rr:
                        continue
                    exact += mp.log(rr / az)
                    cnt += 1
            agree = abs(jensen - exact) <= tol10
            if not agree and row is not None:
                row.flag("counting-route-disagreement-" + name)
            return CountingResult(float(exact), cnt, float(jensen),
                                  float(exact), 0.0, agree, "exact-roots")

        if fn.is_zero_free():
            agree = abs(jensen) <= tol10
            if not agree and row is not None:
                row.flag("counting-route-disagreement-" + name)
            return CountingResult(0.0, 0, float(jensen), 0.0, 0.0, agree,
                                  "zero-free")

        if count_at_r < 0:
            # No certified count at this radius: keep the circle-average
            # route but mark the row (no silent single-route certification).
            if row is not None:
                row.flag("no-certified-count-" + name)
            return CountingResult(float(jensen), -1, float(jensen),
                                  float("nan"), float("inf"), False,
                                  "jensen-only")

        counts = self._zero_counts(name, fn, r_used, count_at_r, ord0)
        lower = 0.0
        upper = 0.0
        for (t0, c0), (t1, c1) in zip(counts, counts[1:]):
            dt = math.log(t1 / t0)
            lower += (c0 - ord0) * dt
            upper += (c1 - ord0) * dt
        core = counts[0][0]
        with workdps(spec.prec + 20):
            base = ord0 * mp.log(mp.mpf(r_used))
        lower += float(base)
        upper += float(base)
        mid = 0.5 * (lower + upper)
        band = 0.5 * (upper - lower)
        agree = abs(float(jensen) - mid) <= band + tol10
        if not agree and row is not None:
            row.flag("counting-route-disagreement-" + name)
        return CountingResult(float(jensen), count_at_r, float(jensen), mid,
                              band, agree, "winding-grid[core=%.3g]" % core)

    def wronskian_counting(self, r_used, row=None):
        """N applied to the Wronskian, by the strongest available route."""
        spec = self.spec
        w = self.wronskian
        tol10 = 10 * spec.tol
        if isinstance(w, ZeroFreeExp):
            return CountingResult(0.0, 0, 0.0, 0.0, 0.0, True,
                                  "zero-free-closed-form")
        if isinstance(w, Polynomial):
            ordm, lead = w.vanishing_order()
            with workdps(spec.prec + 20):
                rr = mp.mpf(r_used)
                exact = ordm * mp.log(rr)
                cnt = ordm
                for z in w.roots(prec=spec.prec + 10):
                    az = abs(z)
                    if az == 0 or az > rr:
                        continue
                    exact += mp.log(rr / az)
                    cnt += 1

            def nodes(n):
                block = self._blocked(w, r_used, n)
                with workdps(block.dps):
                    return [mp.log(abs(v)) for v in block.values]

            gmean, _, _ = self._refine_mean(nodes, "jensen-wronskian", row)
            with workdps(spec.prec + 20):
                jensen = gmean - mp.log(abs(lead.to_mpc()))
            agree = abs(jensen - exact) <= tol10
            if not agree and row is not None:
                row.flag("counting-route-disagreement-wronskian")
            return CountingResult(float(exact), cnt, float(jensen),
                                  float(exact), 0.0, agree, "exact-roots")
        if isinstance(w, ExpPolynomial):
            fn = w
        elif w is None:
            fn = _NumericWronskian(self)
        else:
            raise CurveError("unsupported Wronskian closed form")
        if fn.is_zero_free():
            return CountingResult(0.0, 0, 0.0, 0.0, 0.0, True, "zero-free")
        ordm, lead = (fn.vanishing_order() if isinstance(fn, ExpPolynomial)
                      else fn.vanishing_order(prec=spec.prec + 20))
        with workdps(spec.prec + 20):
            log_lead = mp.log(abs(lead.to_mpc() if isinstance(lead, QC)
                                  else lead))

        def nodes(n):
            block = self._blocked(fn, r_used, n)
            with workdps(block.dps):
                return [mp.log(abs(v)) for v in block.values]

        gmean, _, _ = self._refine_mean(nodes, "jensen-wronskian", row)
        with workdps(spec.prec + 20):
            jensen = gmean - log_lead
        t_used, cnt = self._count_with_retry(fn, r_used, "wronskian")
        counts = self._zero_counts("__wronskian__", fn, t_used, cnt, ordm)
        lower = upper = 0.0
        for (t0, c0), (t1, c1) in zip(counts, counts[1:]):
            dt = math.log(t1 / t0)
            lower += (c0 - ordm) * dt
            upper += (c1 - ordm) * dt
        with workdps(spec.prec + 20):
            base = float(ordm * mp.log(mp.mpf(r_used)))
        mid = 0.5 * (lower + upper) + base
        band = 0.5 * (upper - lower)
        agree = abs(float(jensen) - mid) <= band + tol10
        if not agree and row is not None:
            row.flag("counting-route-disagreement-wronskian")
        return CountingResult(float(jensen), cnt, float(jensen), mid, band,
                              agree, "winding-grid")

    def _blocked(self, fn, r, n):
        """Certified circle block for an auxiliary function (Wronskian)."""
        rel = self.spec.node_rel()
        for dps in self.spec.dps_ladder():
            block = fn.circle_block(r, n, dps=dps)
            with workdps(dps):
                if block.err == 0 or all(
                    abs(v) * rel >= block.err for v in block.values
                ):
                    return block
        raise PrecisionExhausted("auxiliary block uncertified at r=%g" % r)

    # -- radius selection -----------------------------------------------------

    def choose_radius(self, r):
        """Nudge r until every section has a certifiably zero-free annulus.

        The annulus half-width descends from nudge_delta so that sections
        with dense zero sequences (modulus spacing below delta*r) still get
        a certificate, just a narrower one.  Returns (r_used, nudged,
        counts dict, bands dict or None); counts are the certified zero
        counts inside the used circle and bands the per-section certified
        half-widths.  bands is None when no candidate radius worked.
        """
        deltas = [self.spec.nudge_delta / (1 << j) for j in range(4)]
        watch = list(self.sections.items())
        if self.wronskian is None:
            watch.append(("__wronskian__", _NumericWronskian(self)))
        elif isinstance(self.wronskian, ExpPolynomial) and not \
                self.wronskian.is_zero_free():
            watch.append(("__wronskian__", self.wronskian))
        for u in self.spec.nudge_steps:
            rc = r * (1 + u)
            counts = {}
            bands = {}
            ok = True
            for name, fn in watch:
                if fn.is_zero_free():
                    counts[name] = 0
                    continue
                got = None
                for delta in deltas:
                    try:
                        lo = self.count_zeros_fn(fn, rc * (1 - delta), name)
                        hi = self.count_zeros_fn(fn, rc * (1 + delta), name)
                    except PrecisionExhausted:
                        continue
                    if lo == hi:
                        got = (lo, delta)
                        pool = self._zero_pool.setdefault(name, {})
                        pool[rc * (1 - delta)] = lo
                        pool[rc * (1 + delta)] = hi
                        break
                if got is None:
                    ok = False
                    break
                counts[name], bands[name] = got
            if ok:
                return rc, (u != 0.0), counts, bands
        # No clean candidate: fall back to the requested radius with
        # best-effort counts and a flag; callers add an exclusion-arc bound.
        counts = {}
        for name, fn in watch:
            if fn.is_zero_free():
                counts[name] = 0
                continue
            try:
                _, counts[name] = self._count_with_retry(fn, r, name)
            except PrecisionExhausted:
                counts[name] = -1
        return r, False, counts, None

    # -- full row ---------------------------------------------------------------

    def analyze_radius(self, r) -> ReportRow:
        spec = self.spec
        r_used, nudged, counts, bands = self.choose_radius(r)
        row = ReportRow(r_requested=float(r), r_used=float(r_used),
                        nudged=nudged)
        if bands is None:
            row.flag("resolution-band")
            delta = spec.nudge_delta / 8
            row.diagnostics["exclusion_bound"] = (
                4 * delta * abs(math.log(delta))
            )
        elif bands:
            row.diagnostics["band_delta"] = min(bands.values())
        T, terr = self.characteristic(r_used, row)
        row.T = float(T)
        row.diagnostics["T_err"] = float(terr)
        n1res = self.wronskian_counting(r_used, row)
        row.N1 = n1res.value
        row.diagnostics["N1_route"] = n1res.route
        row.diagnostics["N1_band"] = n1res.band
        for name in self.system.names():
            m_val, m_err, _ = self.proximity_m(name, r_used, row)
            row.m[name] = float(m_val)
            cres = self.counting(name, r_used, counts.get(name, -1), row)
            row.N[name] = cres.value
            row.n_counts[name] = cres.count
            row.diagnostics["count_band_" + name] = cres.band
            row.diagnostics["count_route_" + name] = cres.route
        for k in range(1, self.curve.n + 1):
            mk, mkerr = self.flat_proximity(k, r_used, row)
            row.m_k.append(float(mk))
        dim = self.curve.n + 1
        row.S_thm1 = dim * row.T - sum(row.m_k) - row.N1
        if self.system.is_admissible(prec=spec.prec):
            total_m = sum(row.m.values())
            row.S_cartan = dim * row.T - total_m - row.N1
            if len(self.system) >= dim:
                row.prop_gap = sum(row.m_k) - total_m
        self._caches.clear()  # zero-count pool persists; blocks do not
        return row


class _NumericWronskian:
    """Wronskian as determinant of derivative circle blocks (fallback)."""

    def __init__(self, analyzer):
        self.analyzer = analyzer
        self.components = analyzer.curve.components

    def circle_block(self, r, n, deriv=0, dps=30, floor_abs=None):
        if deriv:
            raise ValueError("no derivatives of the numeric Wronskian")
        size = len(self.components)
        cache = self.analyzer.cache(r)
        blocks = [
            [cache.comp_block(j, n, dps, deriv=k) for j in range(size)]
            for k in range(size)
        ]
        with workdps(dps):
            values = []
            err = mp.mpf(0)
            fact = math.factorial(size)
            for node in range(n):
                mtx = [[blocks[k][j].values[node] for j in range(size)]
                       for k in range(size)]
                amax = max(abs(x) for row in mtx for x in row)
                emax = max(b.err for row in blocks for b in row)
                values.append(_complex_det(mtx))
                err = max(err, fact * size * (amax ** (size - 1)) * emax)
            return CircleBlock(mp.mpf(r), n, 0, dps, values, err)

    def eval(self, z, deriv=0, prec=30):
        from .entire import wronskian_at

        return wronskian_at(self.components, z, prec=prec)

    def vanishing_order(self, prec=60):
        return wronskian_vanishing_order(self.components, prec=prec)

    def is_zero_free(self):
        return None

    def key(self):
        return ("numeric-wronskian",)


# ---------------------------------------------------------------------------
# report drivers
# ---------------------------------------------------------------------------


def smt_report(curve, system, grid: RadialGrid,
               spec: QuadratureSpec = QuadratureSpec(),
               lattice=None, meta=None, workers=1) -> AnalysisReport:
    """Full report: characteristic, proximities, countings, slack columns.

    With workers > 1 radii are analyzed concurrently, one analyzer per
    radius so per-radius caches stay thread-confined; numeric sections
    still serialize on the precision lock.  Rows come out in grid order
    either way and the sequential path (the default) shares one analyzer
    so its zero-count pool carries across radii.
    """
    report = AnalysisReport(
        curve_label=curve.label,
        system_name=system.name,
        spec=spec,
        plane_names=system.names(),
        dim=curve.n + 1,
        meta=dict(meta or {}),
    )
    if workers and int(workers) > 1 and len(grid.radii) > 1:
        def one(r):
            return CurveAnalyzer(curve, system, spec,
                                 lattice=lattice).analyze_radius(r)

        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            report.rows.extend(pool.map(one, grid.radii))
    else:
        analyzer = CurveAnalyzer(curve, system, spec, lattice=lattice)
        for r in grid.radii:
            report.rows.append(analyzer.analyze_radius(r))
    report.validate()
    return report


def cartan_subreport(report: AnalysisReport, names):
    """Per-radius Cartan sums for an admissible subset, from stored rows."""
    out = []
    for row in report.rows:
        total = sum(row.m[name] for name in names)
        s = report.dim * row.T - total - row.N1
        out.append({
            "r": row.r_used,
            "T": row.T,
            "sum_m": total,
            "N1": row.N1,
            "S_cartan": s,
            "ratio": total / row.T if row.T else float("nan"),
            "status": row.status,
        })
    return out


def proximity_gap_rows(report: AnalysisReport):
    """Σ_a m − Σ_k m_k per radius (bounded above when the system is
    admissible; reported with a simple trend diagnostic)."""
    rows = []
    for row in report.rows:
        gap = sum(row.m.values()) - sum(row.m_k)
        rows.append({"r": row.r_used, "gap": gap, "status": row.status})
    return rows


def defect_estimates(report: AnalysisReport):
    """Tail estimates of deficiencies from the certified rows."""
    rows = report.certified_rows()
    if len(rows) < 10:
        raise ValueError("defect estimates need at least 10 certified radii")
    tail = rows[-max(3, len(rows) // 3):]
    n = report.dim - 1
    out = {"delta_k": [], "delta_a": {}, "conjecture_delta2_leq_1": None}
    for k in range(n):
        vals = [row.m_k[k] / row.T for row in tail]
        out["delta_k"].append(min(vals))
    for name in report.plane_names:
        out["delta_a"][name] = min(row.m[name] / row.T for row in tail)
    if n >= 2:
        out["conjecture_delta2_leq_1"] = bool(out["delta_k"][1] <= 1.0 + 0.1)
    return out


# ---------------------------------------------------------------------------
# standalone operations (thin wrappers used by tests and the check suites)
# ---------------------------------------------------------------------------


def characteristic(curve, r, spec=QuadratureSpec(), system=None):
    """T(r, f) for a curve, without building a full report."""
    sys_ = system or _coordinate_system(curve.n + 1)
    analyzer = CurveAnalyzer(curve, sys_, spec)
    value, err = analyzer.characteristic(r)
    return float(value), float(err)


def _coordinate_system(dim):
    planes = []
    for j in range(dim):
        v = [0] * dim
        v[j] = 1
        planes.append(Hyperplane(v, name="e%d" % j))
    return HyperplaneSystem(planes, name="coordinates")


def count_zeros(fn, r, spec=QuadratureSpec()):
    """Certified zero count of a component-protocol function in |z| < r."""
    probe = _StandaloneCounter(spec)
    return probe.count_zeros_fn(fn, r)


def counting_N(fn, r, spec=QuadratureSpec()):
    """Counting function of zeros of fn, both routes, standalone."""
    probe = _StandaloneCounter(spec)
    return probe.counting_fn(fn, r)


class _StandaloneCounter(CurveAnalyzer):
    """Analyzer shell for single-function counting (no curve geometry)."""

    def __init__(self, spec):
        self.spec = spec
        self._zero_pool = {}
        self._caches = {}
        self._origin = {}

    def counting_fn(self, fn, r):
        tol10 = 10 * self.spec.tol
        if isinstance(fn, (Polynomial, ExpPolynomial)):
            ord0, lead = fn.vanishing_order()
        else:
            ord0, lead = fn.vanishing_order(prec=self.spec.prec + 20)
        with workdps(self.spec.prec + 20):
            log_lead = mp.log(abs(lead.to_mpc() if isinstance(lead, QC)
                                  else lead))

        def nodes(n):
            block = self._blocked(fn, r, n)
            with workdps(block.dps):
                return [mp.log(abs(v)) for v in block.values]

        gmean, _, _ = self._refine_mean(nodes, "jensen-standalone")
        with workdps(self.spec.prec + 20):
            jensen = gmean - log_lead

        if isinstance(fn, Polynomial):
            with workdps(self.spec.prec + 20):
                rr = mp.mpf(r)
                exact = ord0 * mp.log(rr)
                cnt = ord0
                for z in fn.roots(prec=self.spec.prec + 10):
                    az = abs(z)
                    if az == 0 or az > rr:
                        continue
                    exact += mp.log(rr / az)
                    cnt += 1
            return CountingResult(float(exact), cnt, float(jensen),
                                  float(exact), 0.0,
                                  abs(jensen - exact) <= tol10, "exact-roots")
        if fn.is_zero_free():
            return CountingResult(0.0, 0, float(jensen), 0.0, 0.0,
                                  abs(jensen) <= tol10, "zero-free")
        t_used, cnt = self._count_with_retry(fn, r, "standalone")
        counts = self._zero_counts("__fn__", fn, t_used, cnt, ord0)
        lower = upper = 0.0
        for (t0, c0), (t1, c1) in zip(counts, counts[1:]):
            dt = math.log(t1 / t0)
            lower += (c0 - ord0) * dt
            upper += (c1 - ord0) * dt
        base = float(ord0 * math.log(r))
        mid = 0.5 * (lower + upper) + base
        band = 0.5 * (upper - lower)
        return CountingResult(float(jensen), cnt, float(jensen), mid, band,
                              abs(float(jensen) - mid) <= band + tol10,
                              "winding-grid")
