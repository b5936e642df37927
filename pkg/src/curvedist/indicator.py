"""Exact asymptotic engine: piecewise-sinusoid growth indicators.

Indicators of completely regular growth at order rho are continuous,
2-pi-periodic functions built from arcs A·cos(rho·theta) + B·sin(rho·theta).
Everything here is exact sympy arithmetic: arc endpoints are exact angles
(rational multiples of pi throughout the shipped catalogues), coefficients
exact rationals or closed-form constants, integrals evaluated from the
sinusoid antiderivative at exact endpoints.  Numbers like 2/pi and 32/3 are
reproduced as expressions, not floats; a 60-digit evalf guard only breaks
comparisons between distinct values, never creates equalities.

The engine consumes indicator data per curve family (catalogues are
constructed from known growth, not derived from asymptotic expansions) and
certifies: upper envelopes and sorted envelopes, sector decompositions with
per-sector strict ordering, leading coefficients of the characteristic and
of hyperplane/flat proximity, the Wronskian indicator, the per-sector basis
identity, the asymptotic balance of the main inequality, and the sharp
bound on admissible proximity sums.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import sympy as sp

from .entire import Polynomial
from .exactnum import QC

PI = sp.pi


class IndicatorError(ValueError):
    pass


def _ex(x):
    if isinstance(x, QC):
        return sp.Rational(x.re) + sp.I * sp.Rational(x.im)
    return sp.sympify(x)


def _cmp(a, b):
    """Exact trichotomy with a high-precision guard for undecided forms."""
    d = sp.expand(_ex(a) - _ex(b))
    if d == 0:
        return 0
    z = d.is_zero
    if z:
        return 0
    v = d.evalf(60)
    try:
        fv = float(v)
    except TypeError as exc:
        raise IndicatorError("non-real comparison of %s and %s" % (a, b)) from exc
    if abs(fv) > 1e-45:
        return -1 if fv < 0 else 1
    ds = sp.simplify(d)
    if ds == 0 or ds.is_zero:
        return 0
    v2 = float(ds.evalf(120))
    if abs(v2) > 1e-100:
        return -1 if v2 < 0 else 1
    raise IndicatorError("cannot decide sign of %s" % (ds,))


def _is_zero(x):
    return _cmp(x, 0) == 0


@dataclass(frozen=True)
class TrigArc:
    """One arc [lo, hi] carrying A·cos(rho·theta) + B·sin(rho·theta)."""

    lo: object
    hi: object
    A: object
    B: object

    def value(self, rho, theta):
        return self.A * sp.cos(rho * theta) + self.B * sp.sin(rho * theta)

    def antiderivative(self, rho, theta):
        return (self.A / rho) * sp.sin(rho * theta) - (self.B / rho) * sp.cos(
            rho * theta
        )

    def integral(self, rho):
        return sp.simplify(
            self.antiderivative(rho, self.hi) - self.antiderivative(rho, self.lo)
        )

    def critical_points(self, rho):
        """Interior angles where the derivative vanishes (value = ±R)."""
        if _is_zero(self.A) and _is_zero(self.B):
            return []
        psi = sp.atan2(_ex(self.B), _ex(self.A))
        return _angle_ladder(psi, rho, self.lo, self.hi)

    def interior_zeros(self, rho):
        if _is_zero(self.A) and _is_zero(self.B):
            return []
        psi = sp.atan2(_ex(self.B), _ex(self.A))
        return _angle_ladder(psi + PI / 2, rho, self.lo, self.hi)

    def extrema_on(self, rho):
        """(min, max) of the arc value over the closed interval, exact."""
        cands = [self.value(rho, self.lo), self.value(rho, self.hi)]
        for t in self.critical_points(rho):
            cands.append(self.value(rho, t))
        lo = hi = cands[0]
        for c in cands[1:]:
            if _cmp(c, lo) < 0:
                lo = c
            if _cmp(c, hi) > 0:
                hi = c
        return sp.simplify(lo), sp.simplify(hi)


def _angle_ladder(phase, rho, lo, hi, strict=True):
    """Exact solutions of rho·theta = phase + k·pi inside (lo, hi)."""
    out = []
    flo = float(((_ex(rho) * lo - phase) / PI).evalf(30))
    fhi = float(((_ex(rho) * hi - phase) / PI).evalf(30))
    for k in range(int(sp.floor(flo)) - 1, int(sp.ceiling(fhi)) + 2):
        theta = sp.simplify((phase + k * PI) / rho)
        a = _cmp(theta, lo)
        b = _cmp(theta, hi)
        if (a > 0 and b < 0) or (not strict and (a >= 0 and b <= 0)):
            out.append(theta)
    out.sort(key=lambda t: float(t.evalf(30)))
    return out


class PiecewiseIndicator:
    """Continuous, 2-pi-periodic piecewise sinusoid on [-pi, pi]."""

    def __init__(self, rho, arcs, validate=True):
        self.rho = _ex(rho)
        merged = []
        for arc in arcs:
            arc = TrigArc(
                _ex(arc.lo), _ex(arc.hi),
                sp.simplify(_ex(arc.A)), sp.simplify(_ex(arc.B)),
            )
            if merged and _is_zero(merged[-1].A - arc.A) and _is_zero(
                merged[-1].B - arc.B
            ) and _is_zero(merged[-1].hi - arc.lo):
                merged[-1] = TrigArc(merged[-1].lo, arc.hi, merged[-1].A,
                                     merged[-1].B)
            else:
                merged.append(arc)
        self.arcs = tuple(merged)
        if validate:
            self._validate()

    def _validate(self):
        if not self.arcs:
            raise IndicatorError("indicator needs at least one arc")
        if _cmp(self.arcs[0].lo, -PI) != 0 or _cmp(self.arcs[-1].hi, PI) != 0:
            raise IndicatorError("arcs must cover [-pi, pi]")
        for a, b in zip(self.arcs, self.arcs[1:]):
            if _cmp(a.hi, b.lo) != 0:
                raise IndicatorError("arcs must abut without gaps or overlaps")
            if not _is_zero(a.value(self.rho, a.hi) - b.value(self.rho, b.lo)):
                raise IndicatorError("indicator discontinuous at %s" % (a.hi,))
        left = self.arcs[0].value(self.rho, -PI)
        right = self.arcs[-1].value(self.rho, PI)
        if not _is_zero(left - right):
            raise IndicatorError("indicator violates 2-pi periodicity")

    def breakpoints(self):
        out = [self.arcs[0].lo]
        for a in self.arcs:
            out.append(a.hi)
        return out

    def arc_at(self, lo, hi):
        """The unique arc containing [lo, hi] (a cell of a refinement)."""
        for a in self.arcs:
            if _cmp(a.lo, lo) <= 0 and _cmp(a.hi, hi) >= 0:
                return a
        raise IndicatorError("no arc contains [%s, %s]" % (lo, hi))

    def value(self, theta):
        theta = _ex(theta)
        for a in self.arcs:
            if _cmp(a.lo, theta) <= 0 and _cmp(theta, a.hi) <= 0:
                return sp.simplify(a.value(self.rho, theta))
        raise IndicatorError("angle %s outside [-pi, pi]" % (theta,))

    def integral(self):
        return sp.simplify(sum((a.integral(self.rho) for a in self.arcs),
                               sp.Integer(0)))

    def shift(self, phi):
        """h(theta - phi), re-wrapped into [-pi, pi].

        Wrapped pieces rotate their coefficients by rho·(phi + 2·pi·k), so a
        corner sitting at ±pi can move into the interior.
        """
        phi = _ex(phi)
        phi = sp.simplify(phi - 2 * PI * sp.floor((phi + PI) / (2 * PI)))
        pieces = []
        for arc in self.arcs:
            for k in (-1, 0, 1):
                lo = arc.lo + phi + 2 * PI * k
                hi = arc.hi + phi + 2 * PI * k
                if _cmp(hi, -PI) <= 0 or _cmp(lo, PI) >= 0:
                    continue
                clo = lo if _cmp(lo, -PI) > 0 else -PI
                chi = hi if _cmp(hi, PI) < 0 else PI
                if _cmp(clo, chi) >= 0:
                    continue
                chi_ang = self.rho * (phi + 2 * PI * k)
                a2 = arc.A * sp.cos(chi_ang) - arc.B * sp.sin(chi_ang)
                b2 = arc.A * sp.sin(chi_ang) + arc.B * sp.cos(chi_ang)
                pieces.append(TrigArc(sp.simplify(clo), sp.simplify(chi),
                                      sp.simplify(a2), sp.simplify(b2)))
        pieces.sort(key=lambda a: float(a.lo.evalf(30)))
        return PiecewiseIndicator(self.rho, pieces)

    def scale(self, c):
        c = _ex(c)
        if _cmp(c, 0) < 0:
            raise IndicatorError("indicator scaling must be nonnegative")
        return PiecewiseIndicator(
            self.rho,
            [TrigArc(a.lo, a.hi, c * a.A, c * a.B) for a in self.arcs],
        )

    def __eq__(self, other):
        if not isinstance(other, PiecewiseIndicator):
            return NotImplemented
        if _cmp(self.rho, other.rho) != 0 or len(self.arcs) != len(other.arcs):
            return False
        for a, b in zip(self.arcs, other.arcs):
            if (_cmp(a.lo, b.lo) or _cmp(a.hi, b.hi)
                    or not _is_zero(a.A - b.A) or not _is_zero(a.B - b.B)):
                return False
        return True

    def positive_intervals(self):
        """Maximal open intervals where the value is > 0 ("humps"),
        merged across the ±pi seam when the value there is positive."""
        points = list(self.breakpoints())
        for a in self.arcs:
            points.extend(a.interior_zeros(self.rho))
        points = _sorted_unique(points)
        humps = []
        for lo, hi in zip(points, points[1:]):
            mid = (lo + hi) / 2
            if _cmp(self.value(mid), 0) > 0:
                if humps and _cmp(humps[-1][1], lo) == 0 and _cmp(
                    self.value(lo), 0
                ) > 0:
                    humps[-1] = (humps[-1][0], hi)
                else:
                    humps.append((lo, hi))
        if len(humps) > 1 and _cmp(self.value(PI), 0) > 0:
            first, last = humps[0], humps[-1]
            if _cmp(first[0], -PI) == 0 and _cmp(last[1], PI) == 0:
                humps = humps[1:-1] + [(last[0], first[1] + 2 * PI)]
        return humps


def zero_indicator(rho):
    return PiecewiseIndicator(rho, [TrigArc(-PI, PI, 0, 0)])


def _sorted_unique(angles):
    out = []
    for t in sorted(angles, key=lambda x: float(_ex(x).evalf(30))):
        if not out or _cmp(out[-1], t) != 0:
            out.append(_ex(t))
    return out


def _refined_cells(indicators):
    """Common refinement of all breakpoints and pairwise crossing angles."""
    points = []
    for h in indicators:
        points.extend(h.breakpoints())
    points = _sorted_unique(points)
    cells = []
    for lo, hi in zip(points, points[1:]):
        reps = [h.arc_at(lo, hi) for h in indicators]
        cross = set()
        for a, b in itertools.combinations(range(len(reps)), 2):
            da = reps[a].A - reps[b].A
            db = reps[a].B - reps[b].B
            if _is_zero(da) and _is_zero(db):
                continue
            psi = sp.atan2(_ex(db), _ex(da))
            rho = indicators[0].rho
            for t in _angle_ladder(psi + PI / 2, rho, lo, hi):
                cross.add(t)
        subpoints = _sorted_unique([lo] + list(cross) + [hi])
        for slo, shi in zip(subpoints, subpoints[1:]):
            cells.append((slo, shi, reps))
    return cells


def _common_rho(indicators):
    rho = indicators[0].rho
    for h in indicators[1:]:
        if _cmp(h.rho, rho) != 0:
            raise IndicatorError("indicators of different orders")
    return rho


def pointwise_max(indicators):
    """Exact upper envelope of a nonempty family of equal order."""
    if not indicators:
        raise IndicatorError("empty family")
    rho = _common_rho(indicators)
    arcs = []
    for lo, hi, reps in _refined_cells(indicators):
        mid = (lo + hi) / 2
        best = None
        for arc in reps:
            v = arc.value(rho, mid)
            if best is None or _cmp(v, best.value(rho, mid)) > 0:
                best = arc
        arcs.append(TrigArc(lo, hi, best.A, best.B))
    return PiecewiseIndicator(rho, arcs)


def sorted_envelopes(indicators):
    """The k-th smallest value functions; input multiplicity = repetition."""
    if not indicators:
        raise IndicatorError("empty family")
    rho = _common_rho(indicators)
    per_rank = [[] for _ in indicators]
    for lo, hi, reps in _refined_cells(indicators):
        mid = (lo + hi) / 2
        order = sorted(reps, key=_MidKey(rho, mid))
        for k, arc in enumerate(order):
            per_rank[k].append(TrigArc(lo, hi, arc.A, arc.B))
    return [PiecewiseIndicator(rho, arcs) for arcs in per_rank]


class _MidKey:
    """Total order of arcs by exact value at a fixed angle."""

    def __init__(self, rho, mid):
        self.rho = rho
        self.mid = mid

    def __call__(self, arc):
        return _EV(arc.value(self.rho, self.mid))


class _EV:
    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return _cmp(self.v, other.v) < 0

    def __eq__(self, other):
        return _cmp(self.v, other.v) == 0


class IndicatorFamily:
    """Named indicators of one common order."""

    def __init__(self, members, rho=None):
        self.members = dict(members)
        if not self.members:
            raise IndicatorError("empty family")
        self.rho = _ex(rho) if rho is not None else _common_rho(
            list(self.members.values())
        )
        _common_rho(list(self.members.values()) + [zero_indicator(self.rho)])

    def names(self):
        return list(self.members)

    def __getitem__(self, name):
        return self.members[name]

    def upper_envelope(self):
        return pointwise_max(list(self.members.values()))


# -- sector decomposition and special bases ----------------------------------


@dataclass
class Sector:
    lo: object
    hi: object
    groups: list  # ascending: (TrigArc rep, tuple of member names)


@dataclass
class SectorDecomposition:
    rho: object
    rays: list
    sectors: list

    def group_counts(self):
        return [len(s.groups) for s in self.sectors]


def sector_decomposition(family: IndicatorFamily):
    """Exceptional rays plus per-sector strictly ordered indicator groups.

    Identical member indicators merge into one group (multiplicity by name
    list); distinct ones must be strictly ordered throughout each sector,
    which holds because cells were refined at every crossing; the midpoint
    comparison certifies it.
    """
    names = list(family.members)
    inds = [family.members[nm] for nm in names]
    rho = _common_rho(inds)
    points = []
    for h in inds:
        points.extend(h.breakpoints())
    for ha, hb in itertools.combinations(inds, 2):
        for lo, hi, reps in _refined_cells([ha, hb]):
            da = reps[0].A - reps[1].A
            db = reps[0].B - reps[1].B
            if _is_zero(da) and _is_zero(db):
                continue
            psi = sp.atan2(_ex(db), _ex(da))
            points.extend(_angle_ladder(psi + PI / 2, rho, lo, hi,
                                        strict=False))
    points = _sorted_unique(points)
    if _cmp(points[0], -PI) != 0:
        points.insert(0, -PI)
    if _cmp(points[-1], PI) != 0:
        points.append(PI)
    sectors = []
    for lo, hi in zip(points, points[1:]):
        mid = (lo + hi) / 2
        reps = [h.arc_at(lo, hi) for h in inds]
        buckets = []
        for nm, arc in zip(names, reps):
            for rep, group in buckets:
                if _is_zero(rep.A - arc.A) and _is_zero(rep.B - arc.B):
                    group.append(nm)
                    break
            else:
                buckets.append((arc, [nm]))
        buckets.sort(key=lambda t: _EV(t[0].value(rho, mid)))
        for (r1, _), (r2, _) in zip(buckets, buckets[1:]):
            if _cmp(r1.value(rho, mid), r2.value(rho, mid)) >= 0:
                raise IndicatorError("sector ordering not strict at %s" % mid)
        sectors.append(Sector(lo, hi, [(r, tuple(g)) for r, g in buckets]))
    rays = [p for p in points if _cmp(p, -PI) != 0]
    return SectorDecomposition(rho, rays, sectors)


@dataclass
class SpecialBasisProfile:
    """Per sector, the multiset of indicators a special basis realizes."""

    rho: object
    dim: int
    sectors: list  # (lo, hi, [(TrigArc rep, multiplicity)]) ascending


def special_basis_profile(decomp: SectorDecomposition, jumps, dim):
    """Attach dimension jumps to each sector's ordered distinct indicators.

    jumps: one tuple used for every sector, or a list of tuples per sector.
    The jumps are input data (they come from the dimensions of the nested
    solution subspaces); each tuple must sum to dim with one entry per group.
    """
    if isinstance(jumps, (tuple, list)) and jumps and isinstance(
        jumps[0], int
    ):
        jump_list = [tuple(jumps)] * len(decomp.sectors)
    else:
        jump_list = [tuple(j) for j in jumps]
    if len(jump_list) != len(decomp.sectors):
        raise IndicatorError("need one jump tuple per sector")
    out = []
    for sector, jmp in zip(decomp.sectors, jump_list):
        if len(jmp) != len(sector.groups):
            raise IndicatorError(
                "jump tuple length %d does not match %d distinct indicators"
                % (len(jmp), len(sector.groups))
            )
        if sum(jmp) != dim or any(j < 1 for j in jmp):
            raise IndicatorError("dimension jumps must be positive and sum "
                                 "to the space dimension")
        out.append((sector.lo, sector.hi,
                    [(rep, j) for (rep, _), j in zip(sector.groups, jmp)]))
    return SpecialBasisProfile(decomp.rho, dim, out)


def profile_envelopes(profile: SpecialBasisProfile):
    """Global sorted envelopes h_(0) ≤ ... ≤ h_(dim-1) of the special basis."""
    per_rank = [[] for _ in range(profile.dim)]
    for lo, hi, groups in profile.sectors:
        k = 0
        for rep, mult in groups:
            for _ in range(mult):
                per_rank[k].append(TrigArc(lo, hi, rep.A, rep.B))
                k += 1
    return [PiecewiseIndicator(profile.rho, arcs) for arcs in per_rank]


def wronskian_indicator(exponent, rho):
    """Indicator of exp(E(z)) at order rho for a polynomial exponent E.

    Growth order of exp(E) is deg E; below rho the indicator is identically
    zero, at rho it is Re(c·e^{i·rho·theta}) for the leading coefficient c,
    above rho the family order was chosen inconsistently.
    """
    rho = _ex(rho)
    if isinstance(exponent, Polynomial):
        deg = exponent.degree
        lead = exponent.leading()
    else:
        poly = sp.Poly(sp.sympify(exponent), sp.Symbol("z"))
        deg = poly.degree()
        lead = poly.LC()
    if deg < 1:
        return zero_indicator(rho)
    c = _cmp(sp.Integer(deg), rho)
    if c < 0:
        return zero_indicator(rho)
    if c > 0:
        raise IndicatorError("exponent degree exceeds the family order")
    lead = _ex(lead)
    return PiecewiseIndicator(
        rho, [TrigArc(-PI, PI, sp.re(lead), -sp.im(lead))]
    )


# -- certificates -------------------------------------------------------------


def characteristic_coefficient(h_top: PiecewiseIndicator):
    return sp.simplify(h_top.integral() / (2 * PI))


def proximity_coefficient(h_top, h_member):
    """(1/2pi) integral of (h_top - h_member); requires h_member ≤ h_top."""
    if pointwise_max([h_top, h_member]) != pointwise_max([h_top]):
        raise IndicatorError("member indicator exceeds the envelope")
    return sp.simplify((h_top.integral() - h_member.integral()) / (2 * PI))


def flat_proximity_coefficients(envelopes):
    """m_k coefficients (1/2pi)∫(h_top - h_(k-1)) from sorted envelopes."""
    top = envelopes[-1].integral()
    return [
        sp.simplify((top - env.integral()) / (2 * PI))
        for env in envelopes[:-1]
    ]


@dataclass
class AsymptoticCertificate:
    rho: object
    T_coeff: object
    m_coeffs: dict
    mk_coeffs: list
    N1_coeff: object
    lemma_sector_residuals: list
    lemma_identity_holds: bool
    balance_residual: object
    balance_holds: bool


def asymptotic_certificate(profile: SpecialBasisProfile, h_wronskian,
                           members_for_m=None):
    """Exact leading coefficients plus the two identity certificates.

    The per-sector identity states that the special-basis indicators sum to
    the Wronskian indicator; the balance certificate states that the flat
    proximity coefficients plus the Wronskian counting coefficient equal
    (n+1) times the characteristic coefficient.
    """
    envs = profile_envelopes(profile)
    h_top = envs[-1]
    T = characteristic_coefficient(h_top)
    mk = flat_proximity_coefficients(envs)
    n1 = sp.simplify(h_wronskian.integral() / (2 * PI))
    residuals = []
    ok = True
    for lo, hi, groups in profile.sectors:
        acc_a = sp.Integer(0)
        acc_b = sp.Integer(0)
        for rep, mult in groups:
            acc_a += mult * rep.A
            acc_b += mult * rep.B
        warc = h_wronskian.arc_at(lo, hi)
        ra = sp.simplify(acc_a - warc.A)
        rb = sp.simplify(acc_b - warc.B)
        residuals.append((lo, hi, ra, rb))
        if not (_is_zero(ra) and _is_zero(rb)):
            ok = False
    balance = sp.simplify(
        sum(mk, sp.Integer(0)) + n1 - profile.dim * T
    )
    m_coeffs = {}
    if members_for_m:
        for name, h in members_for_m.items():
            m_coeffs[name] = proximity_coefficient(h_top, h)
    return AsymptoticCertificate(
        rho=profile.rho,
        T_coeff=T,
        m_coeffs=m_coeffs,
        mk_coeffs=mk,
        N1_coeff=n1,
        lemma_sector_residuals=residuals,
        lemma_identity_holds=ok,
        balance_residual=balance,
        balance_holds=_is_zero(balance),
    )


# -- admissible proximity sums ------------------------------------------------


def classify_on_interval(h: PiecewiseIndicator, lo, hi):
    """('negative', 'nonpositive', or 'positive-somewhere') on (lo, hi)."""
    pts = [p for p in h.breakpoints() if _cmp(p, lo) > 0 and _cmp(p, hi) < 0]
    pts = _sorted_unique([lo] + pts + [hi])
    worst_max = None
    any_interior_zero = False
    for a, b in zip(pts, pts[1:]):
        arc = h.arc_at(a, b)
        piece = TrigArc(a, b, arc.A, arc.B)
        _, piece_max = piece.extrema_on(h.rho)
        if worst_max is None or _cmp(piece_max, worst_max) > 0:
            worst_max = piece_max
        if _is_zero(arc.A) and _is_zero(arc.B):
            any_interior_zero = True
            continue
        zeros = piece.interior_zeros(h.rho)
        if zeros:
            any_interior_zero = True
        for t in (a, b):
            if _cmp(t, lo) > 0 and _cmp(t, hi) < 0 and _is_zero(
                h.value(t)
            ):
                any_interior_zero = True
    if _cmp(worst_max, 0) > 0:
        return "positive-somewhere"
    if any_interior_zero:
        return "nonpositive"
    return "negative"


def _selection_context(family: IndicatorFamily):
    """Envelope, humps, per-member hump classifications and integrals,
    computed once per family instance (the search evaluates thousands of
    candidate selections against the same data)."""
    ctx = getattr(family, "_selection_ctx", None)
    if ctx is not None:
        return ctx
    h = family.upper_envelope()
    humps = h.positive_intervals()
    order = {"negative": 0, "nonpositive": 1, "positive-somewhere": 2}
    kinds = {}
    for name, member in family.members.items():
        row = []
        for lo, hi in humps:
            if _cmp(hi, PI) > 0:
                k1 = classify_on_interval(member, lo, PI)
                k2 = classify_on_interval(member, -PI, sp.simplify(hi - 2 * PI))
                kind = max(k1, k2, key=lambda k: order[k])
            else:
                kind = classify_on_interval(member, lo, hi)
            row.append(kind)
        kinds[name] = row
    integrals = {name: m.integral() for name, m in family.members.items()}
    ctx = (h.integral(), humps, kinds, integrals)
    family._selection_ctx = ctx
    return ctx


def admissible_sum(family: IndicatorFamily, selection, dependent_sets=()):
    """Σ_j ∫(h - h_j) for an admissible selection of family members.

    Admissibility per positive hump of the envelope h: at most one selected
    indicator strictly negative inside the hump and at most two nonpositive
    on it; and no forbidden dependent set fully selected.  Violations raise.
    """
    h_int, humps, kinds, integrals = _selection_context(family)
    for dep in dependent_sets:
        if all(name in selection for name in dep):
            raise IndicatorError(
                "selection contains the dependent set %s" % (sorted(dep),)
            )
    for idx, (lo, hi) in enumerate(humps):
        strict = sum(1 for name in selection if kinds[name][idx] == "negative")
        nonpos = strict + sum(
            1 for name in selection if kinds[name][idx] == "nonpositive"
        )
        if strict > 1 or nonpos > 2:
            raise IndicatorError(
                "selection not admissible on the hump (%s, %s): %d strictly "
                "negative, %d nonpositive" % (lo, hi, strict, nonpos)
            )
    total = sp.Integer(0)
    for name in selection:
        total += h_int - integrals[name]
    return sp.simplify(total)


def maximal_admissible_sum(family: IndicatorFamily, dependent_sets=(),
                           max_multiplicity=2):
    """Exhaustive search for the largest admissible Σ ∫(h - h_j)."""
    names = list(family.members)
    best = sp.Integer(0)
    best_sel = ()
    for counts in itertools.product(
        range(max_multiplicity + 1), repeat=len(names)
    ):
        sel = []
        for nm, c in zip(names, counts):
            sel.extend([nm] * c)
        if not sel:
            continue
        try:
            val = admissible_sum(family, sel, dependent_sets)
        except IndicatorError:
            continue
        if _cmp(val, best) > 0:
            best = val
            best_sel = tuple(sel)
    return sp.simplify(best), best_sel


# -- shipped catalogues -------------------------------------------------------


def airy_catalogue():
    """The seven catalogue indicators of the order-3/2 equation family.

    Three rotated decaying solutions (strictly negative on one hump each,
    obtained from one another by ±2pi/3 shifts) and four subdominant ones
    (their positive parts; the last two coincide, carried with multiplicity).
    """
    rho = sp.Rational(3, 2)
    h0 = PiecewiseIndicator(rho, [TrigArc(-PI, PI, -1, 0)])
    h1 = h0.shift(-2 * PI / 3)
    h2 = h0.shift(2 * PI / 3)
    zero = zero_indicator(rho)
    g0 = pointwise_max([h0, zero])
    g1 = pointwise_max([h1, zero])
    g2 = pointwise_max([h2, zero])
    members = {"H0": h0, "H1": h1, "H2": h2,
               "G0": g0, "G1": g1, "G2": g2, "G2b": g2}
    return IndicatorFamily(members, rho=rho)


AIRY_DEPENDENT_SETS = (("H0", "H1", "H2"),)


def exp123_catalogue():
    """Indicators {0, cos, 2cos} of the curve (1 : e^z : e^{2z})."""
    rho = sp.Integer(1)
    return IndicatorFamily({
        "E0": zero_indicator(rho),
        "E1": PiecewiseIndicator(rho, [TrigArc(-PI, PI, 1, 0)]),
        "E2": PiecewiseIndicator(rho, [TrigArc(-PI, PI, 2, 0)]),
    }, rho=rho)
