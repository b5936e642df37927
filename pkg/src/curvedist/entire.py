"""Entire-function building blocks with certified evaluation.

Three component classes share one protocol: exact polynomials, exponential
polynomials (terms p(z)·e^{λz} with exact rational data), and solutions of
linear ODEs y^(N) = Σ P_j(z) y^(j) with polynomial coefficients, given by
initial data at 0.  Each can evaluate itself at a point or on a full circle
of uniformly spaced nodes, and every numeric result travels with a certified
absolute error bound (truncation tail plus roundoff envelope).  Downstream
code escalates working precision and truncation depth against those bounds
rather than trusting any fixed budget; silent truncation starvation is the
dominant failure mode at radii where values span hundreds of orders of
magnitude, so the bounds are not optional decoration.

Wronskians come in closed form whenever the component mix allows it
(polynomial, exponential-polynomial, or a fundamental system of a shared
equation via the Abel identity); only mixed curves fall back to numeric
determinants of derivative samples.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .exactnum import QC, QC_ONE, QC_ZERO, ExactConstant, qc_det

_CTX_LOCK = threading.RLock()

# Derivative orders above this are refused (callers never need more than the
# curve dimension plus a small margin).
MAX_DERIV = 8

# Hard ceiling on Taylor terms before declaring precision exhaustion.
MAX_TAYLOR_TERMS = 400_000


class PrecisionExhausted(RuntimeError):
    """Requested accuracy needs more working digits or terms than allowed."""


class CurveError(ValueError):
    """Curve fails a structural requirement (degenerate, not reduced, ...)."""


@contextmanager
def workdps(dps):
    """Scoped mpmath working precision, serialized across threads.

    mpmath's context is global; the lock makes concurrent analyzer use safe
    at the cost of serializing numeric sections.
    """
    with _CTX_LOCK:
        old = mp.mp.dps
        mp.mp.dps = int(dps)
        try:
            yield mp.mp
        finally:
            mp.mp.dps = old


# ---------------------------------------------------------------------------
# FFT on mpc vectors (power-of-two length), used to turn folded Taylor
# coefficients into values on uniform circle nodes.
# ---------------------------------------------------------------------------


def _fft_pow2(a, sign=1):
    """In-place radix-2 FFT with kernel exp(sign·2πi jk/n).  len(a) = 2^k."""
    n = len(a)
    if n & (n - 1):
        raise ValueError("FFT length must be a power of two")
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    length = 2
    while length <= n:
        w_len = mp.expjpi(mp.mpf(2 * sign) / length)
        half = length >> 1
        for start in range(0, n, length):
            w = mp.mpc(1)
            for k in range(start, start + half):
                u = a[k]
                v = a[k + half] * w
                a[k] = u + v
                a[k + half] = u - v
                w = w * w_len
        length <<= 1
    return a


def circle_values_from_terms(terms, n):
    """Values Σ_m t_m e^{imθ_k} at θ_k = 2πk/n from term list t_m (= a_m r^m).

    Folds indices mod n, then one FFT.  n must be a power of two.
    """
    folded = [mp.mpc(0)] * n
    for m, t in enumerate(terms):
        folded[m % n] += t
    return _fft_pow2(folded, sign=1)


@dataclass
class CircleBlock:
    """Values on the n uniform nodes of |z| = r with a certified bound.

    err bounds the absolute error of every node value (truncation + roundoff).
    """

    r: object
    n: int
    deriv: int
    dps: int
    values: list
    err: object


def _roundoff_envelope(peak, ops, dps):
    """Coarse but safe roundoff bound for ops floating operations at scale
    peak: each mpc operation contributes O(ulp·magnitude)."""
    return peak * mp.mpf(ops + 16) * mp.power(10, -dps + 1)


# ---------------------------------------------------------------------------
# Polynomials over exact complex rationals
# ---------------------------------------------------------------------------


class Polynomial:
    """Polynomial with QC coefficients, ascending order, trailing zeros cut."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [QC.parse(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if self.is_zero:
            return QC_ZERO
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Polynomial(%r)" % (self.coeffs,)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            other = Polynomial([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            other = Polynomial([other])
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            other = Polynomial([other])
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [QC_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def derivative(self):
        return Polynomial([self.coeffs[m] * m for m in range(1, len(self.coeffs))])

    def antiderivative(self):
        """Primitive vanishing at 0."""
        return Polynomial([QC_ZERO] + [c / (m + 1) for m, c in enumerate(self.coeffs)])

    def __call__(self, z):
        """Exact Horner evaluation when z is exact; mpc otherwise."""
        if isinstance(z, (int, Fraction, QC)):
            z = QC.parse(z)
            acc = QC_ZERO
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        acc = mp.mpc(0)
        zz = mp.mpc(z)
        for c in reversed(self.coeffs):
            acc = acc * zz + c.to_mpc()
        return acc

    def eval(self, z, deriv=0, prec=None):
        f = self
        for _ in range(deriv):
            f = f.derivative()
        if isinstance(z, (int, Fraction, QC)):
            return f(z)
        return f(z)

    def divmod(self, other):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lead = other.coeffs[-1]
        quot = [QC_ZERO] * max(0, len(rem) - dq)
        while len(rem) - 1 >= dq and rem:
            c = rem[-1] / lead
            k = len(rem) - 1 - dq
            quot[k] = c
            for i, oc in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * oc
            while rem and rem[-1].is_zero:
                rem.pop()
        return Polynomial(quot), Polynomial(rem)

    def gcd(self, other):
        """Monic exact gcd by the Euclidean algorithm."""
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        inv = QC_ONE / a.leading()
        return a * inv

    def exact_taylor(self, M):
        out = list(self.coeffs[: M + 1])
        out += [QC_ZERO] * (M + 1 - len(out))
        return out

    def vanishing_order(self):
        if self.is_zero:
            raise CurveError("vanishing order of the zero polynomial")
        for m, c in enumerate(self.coeffs):
            if not c.is_zero:
                return m, c
        raise AssertionError("unreachable: trailing zeros are trimmed")

    def is_zero_free(self):
        if self.degree == 0:
            return True
        if self.is_zero:
            return None
        return False

    def roots(self, prec=30):
        """All roots, as mpc at ~prec digits: numpy seed + Newton polish.

        Root finding is infrastructure, not subject matter: numpy supplies
        starting points, a few Newton steps sharpen them at working precision.
        """
        if self.degree < 1:
            return []
        with workdps(prec + 15):
            cs = [complex(c.to_mpc()) for c in self.coeffs]
            seeds = np.roots(list(reversed(cs)))
            der = self.derivative()
            out = []
            for s in seeds:
                x = mp.mpc(s)
                for _ in range(6):
                    d = der(x)
                    if abs(d) == 0:
                        break
                    step = self(x) / d
                    x = x - step
                    if abs(step) < mp.power(10, -prec - 5) * (1 + abs(x)):
                        break
                out.append(x)
            return out

    def circle_block(self, r, n, deriv=0, dps=30, floor_abs=None):
        f = self
        for _ in range(deriv):
            f = f.derivative()
        with workdps(dps):
            rr = mp.mpf(r)
            terms = []
            peak = mp.mpf(0)
            rp = mp.mpf(1)
            for c in f.coeffs:
                t = c.to_mpc() * rp
                terms.append(t)
                peak = max(peak, abs(t))
                rp *= rr
            if not terms:
                return CircleBlock(rr, n, deriv, dps, [mp.mpc(0)] * n, mp.mpf(0))
            values = circle_values_from_terms(terms, n)
            err = _roundoff_envelope(peak, len(terms) + n * max(1, n.bit_length()), dps)
            return CircleBlock(rr, n, deriv, dps, values, err)

    def key(self):
        return ("poly", self.coeffs)


# ---------------------------------------------------------------------------
# Exponential polynomials Σ p_t(z) e^{λ_t z}
# ---------------------------------------------------------------------------


class ExpPolynomial:
    """Finite sum of p(z)·e^{λz} with exact rational λ and polynomial p."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        """terms: mapping λ (QC-coercible) -> Polynomial-coercible."""
        canon = {}
        for lam, p in dict(terms).items():
            lam = QC.parse(lam)
            if not isinstance(p, Polynomial):
                p = Polynomial(p if isinstance(p, (list, tuple)) else [p])
            if p.is_zero:
                continue
            if lam in canon:
                p = canon[lam] + p
            if p.is_zero:
                canon.pop(lam, None)
            else:
                canon[lam] = p
        self.terms = canon

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, ExpPolynomial) and self.terms == other.terms

    def __repr__(self):
        return "ExpPolynomial(%r)" % (self.terms,)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            other = ExpPolynomial({QC_ZERO: Polynomial([other])})
        out = dict(self.terms)
        for lam, p in other.terms.items():
            q = out.get(lam)
            s = p if q is None else q + p
            if s.is_zero:
                out.pop(lam, None)
            else:
                out[lam] = s
        return ExpPolynomial(out)

    def __neg__(self):
        return ExpPolynomial({lam: -p for lam, p in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            other = ExpPolynomial({QC_ZERO: Polynomial([other])})
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QC)):
            other = ExpPolynomial({QC_ZERO: Polynomial([other])})
        out = {}
        for l1, p1 in self.terms.items():
            for l2, p2 in other.terms.items():
                lam = l1 + l2
                prod = p1 * p2
                q = out.get(lam)
                s = prod if q is None else q + prod
                if s.is_zero:
                    out.pop(lam, None)
                else:
                    out[lam] = s
        return ExpPolynomial(out)

    def derivative(self):
        out = ExpPolynomial({})
        for lam, p in self.terms.items():
            out = out + ExpPolynomial({lam: p.derivative() + p * lam})
        return out

    def eval(self, z, deriv=0, prec=None):
        f = self
        for _ in range(deriv):
            f = f.derivative()
        zz = mp.mpc(z)
        acc = mp.mpc(0)
        for lam, p in f.terms.items():
            acc += p(zz) * mp.exp(lam.to_mpc() * zz)
        return acc

    def max_abs_freq(self):
        out = 0.0
        for lam in self.terms:
            out = max(out, math.sqrt(float(lam.abs2())))
        return out

    def dimension_bound(self):
        """dim of the constant-coefficient ODE solution space containing
        this function; a nonzero member vanishes at 0 to order < this."""
        return sum(p.degree + 1 for p in self.terms.values())

    def exact_taylor(self, M):
        out = [QC_ZERO] * (M + 1)
        for lam, p in self.terms.items():
            lam_pow = [QC_ONE]
            for _ in range(M):
                lam_pow.append(lam_pow[-1] * lam)
            fact = [Fraction(1)]
            for m in range(1, M + 1):
                fact.append(fact[-1] / m)
            for i, c in enumerate(p.coeffs):
                if c.is_zero:
                    continue
                for m in range(i, M + 1):
                    out[m] = out[m] + c * lam_pow[m - i] * fact[m - i]
        return out

    def vanishing_order(self):
        if self.is_zero:
            raise CurveError("vanishing order of the zero function")
        budget = self.dimension_bound()
        coeffs = self.exact_taylor(budget)
        for m, c in enumerate(coeffs):
            if not c.is_zero:
                return m, c
        raise AssertionError("nonzero exponential polynomial cannot vanish "
                             "to order >= its dimension bound")

    def is_zero_free(self):
        if self.is_zero:
            return None
        if len(self.terms) == 1:
            (p,) = self.terms.values()
            return p.degree == 0
        return None

    def circle_block(self, r, n, deriv=0, dps=30, floor_abs=None):
        f = self
        for _ in range(deriv):
            f = f.derivative()
        bump = int(self.max_abs_freq() * float(r) / math.log(10)) + 10
        wp = dps + bump
        with workdps(wp):
            rr = mp.mpf(r)
            lam_vals = {lam: lam.to_mpc() for lam in f.terms}
            values = []
            worst = mp.mpf(0)
            for k in range(n):
                z = rr * mp.expjpi(mp.mpf(2 * k) / n)
                acc = mp.mpc(0)
                magsum = mp.mpf(0)
                for lam, p in f.terms.items():
                    t = p(z) * mp.exp(lam_vals[lam] * z)
                    acc += t
                    magsum += abs(t)
                values.append(acc)
                worst = max(worst, magsum)
            err = worst * mp.power(10, -wp + 2) * (len(f.terms) + 4)
        with workdps(dps):
            return CircleBlock(mp.mpf(r), n, deriv, dps, values, mp.mpf(err))

    def key(self):
        return ("exppoly", tuple(sorted(
            ((lam.re, lam.im, p.coeffs) for lam, p in self.terms.items()),
            key=lambda t: (t[0], t[1]),
        )))


# ---------------------------------------------------------------------------
# Linear ODE solutions by Taylor recurrence
# ---------------------------------------------------------------------------


class LinearODE:
    """y^(N) = Σ_{j<N} P_j(z) y^(j) with exact polynomial coefficients."""

    __slots__ = ("coeff_polys", "order", "_pjis")

    def __init__(self, coeff_polys):
        self.coeff_polys = tuple(
            p if isinstance(p, Polynomial) else Polynomial(p) for p in coeff_polys
        )
        self.order = len(self.coeff_polys)
        if self.order < 1:
            raise ValueError("equation order must be at least 1")
        # flat list of (j, i, p_{j,i}) for the recurrence
        self._pjis = tuple(
            (j, i, c)
            for j, p in enumerate(self.coeff_polys)
            for i, c in enumerate(p.coeffs)
            if not c.is_zero
        )

    def __eq__(self, other):
        return isinstance(other, LinearODE) and self.coeff_polys == other.coeff_polys

    def __hash__(self):
        return hash(self.coeff_polys)

    @property
    def max_coeff_degree(self):
        return max((p.degree for p in self.coeff_polys if not p.is_zero), default=0)

    def recurrence_step(self, a, m):
        """a_{m+N} from lower coefficients; works for QC or mpc lists."""
        N = self.order
        acc = None
        for j, i, p in self._pjis:
            if m - i < 0:
                continue
            idx = m - i + j
            w = 1
            for s in range(1, j + 1):
                w *= m - i + s
            term = a[idx] * w
            term = term * p if isinstance(a[idx], QC) else term * p.to_mpc()
            acc = term if acc is None else acc + term
        rising = 1
        for s in range(1, N + 1):
            rising *= m + s
        if acc is None:
            return QC_ZERO if isinstance(a[0], QC) else mp.mpc(0)
        if isinstance(acc, QC):
            return acc * Fraction(1, rising)
        return acc / rising

    def tail_weight(self, r, m):
        """Σ |p_{j,i}| N^j r^i (r/(m+1))^{N-j}; once ≤ 1/4 the scaled Taylor
        terms b = |a| r^m halve per index window of width order+maxdeg."""
        N = self.order
        total = 0.0
        rf = float(r)
        for j, i, p in self._pjis:
            mag = math.sqrt(float(p.abs2()))
            total += mag * (N ** j) * (rf ** i) * (rf / (m + 1)) ** (N - j)
        return total

    def ode_indicator_exponent(self):
        """Antiderivative of the top coefficient: log|W| grows like
        Re of this polynomial along rays (Abel identity)."""
        return self.coeff_polys[-1].antiderivative()


class OdeSolution:
    """Entire solution of a LinearODE determined by initial data at 0.

    Initial data entries are exact (QC) or precision-on-demand constants.
    Exact data yields one exact Taylor cache; otherwise coefficients are
    rebuilt per working precision.
    """

    def __init__(self, ode: LinearODE, data, label=""):
        if len(data) != ode.order:
            raise ValueError("initial data length must equal the order")
        self.ode = ode
        self.data = tuple(
            d if isinstance(d, ExactConstant) else QC.parse(d) for d in data
        )
        self.label = label
        self.exact = all(isinstance(d, QC) for d in self.data)
        if self.exact and all(d.is_zero for d in self.data):
            raise CurveError("zero initial data defines the zero solution")
        self._lock = threading.RLock()
        self._exact_coeffs = None
        self._mpc_coeffs = {}  # dps -> list[mpc]

    # -- Taylor caches -----------------------------------------------------

    def _grow_exact(self, M):
        with self._lock:
            if self._exact_coeffs is None:
                N = self.ode.order
                a = list(self.data)
                fact = 1
                for m in range(N):
                    if m:
                        fact *= m
                    a[m] = a[m] * Fraction(1, fact)
                self._exact_coeffs = a
            a = self._exact_coeffs
            m = len(a) - self.ode.order
            while len(a) <= M:
                a.append(self.ode.recurrence_step(a, m))
                m += 1
            return a

    def exact_taylor(self, M):
        if not self.exact:
            return None
        return list(self._grow_exact(M)[: M + 1])

    def _grow_mpc(self, M, dps):
        with self._lock:
            a = self._mpc_coeffs.get(dps)
            with workdps(dps):
                if a is None:
                    N = self.ode.order
                    a = []
                    fact = 1
                    for m in range(N):
                        if m:
                            fact *= m
                        a.append(self.data[m].to_mpc() / fact)
                    self._mpc_coeffs[dps] = a
                m = len(a) - self.ode.order
                while len(a) <= M:
                    a.append(self.ode.recurrence_step(a, m))
                    m += 1
            return a

    # -- certified truncation ----------------------------------------------

    def _window(self, r, dps, floor_abs, deriv=0):
        """Smallest M with a certified tail bound below the useful floor.

        Returns (M, terms, tail_bound, peak) where terms[m] = a_m r^m (for
        deriv = 0) or the derivative-shifted analogue, at working dps.
        """
        N = self.ode.order
        L = N + self.ode.max_coeff_degree + 1
        with workdps(dps):
            rr = mp.mpf(r)
            ulp_floor = mp.power(10, -dps + 2)
            a = self._grow_mpc(max(4 * L, 64), dps)
            terms = []
            peak = mp.mpf(0)

            def term_at(m):
                c = a[m + deriv]
                w = 1
                for s in range(1, deriv + 1):
                    w *= m + s
                return c * w * mp.power(rr, m)

            m = 0
            M_hi = len(a) - 1 - deriv
            while True:
                while m <= M_hi:
                    t = term_at(m)
                    terms.append(t)
                    peak = max(peak, abs(t))
                    m += 1
                window_max = max(
                    (abs(t) for t in terms[-L:]), default=mp.mpf(0)
                )
                target = max(
                    mp.mpf(floor_abs) if floor_abs is not None else mp.mpf(0),
                    peak * ulp_floor,
                )
                past_weight = self.ode.tail_weight(r, max(m - 1, 1)) <= 0.25
                far_enough = m >= 2 * deriv * L + 2 * L
                if past_weight and far_enough and 4 * L * window_max <= target:
                    tail = 4 * L * window_max
                    return m - 1, terms, tail, peak
                if m + deriv > MAX_TAYLOR_TERMS:
                    raise PrecisionExhausted(
                        "Taylor truncation for %s at r=%s exceeds %d terms"
                        % (self.label or "ode solution", r, MAX_TAYLOR_TERMS)
                    )
                a = self._grow_mpc(min(2 * len(a), MAX_TAYLOR_TERMS + N), dps)
                M_hi = len(a) - 1 - deriv

    def circle_block(self, r, n, deriv=0, dps=30, floor_abs=None):
        if deriv > MAX_DERIV:
            raise ValueError("derivative order above configured maximum")
        M, terms, tail, peak = self._window(r, dps, floor_abs, deriv)
        with workdps(dps):
            values = circle_values_from_terms(terms, n)
            err = tail + _roundoff_envelope(
                peak, len(terms) + n * max(1, n.bit_length()), dps
            )
            return CircleBlock(mp.mpf(r), n, deriv, dps, values, err)

    def eval(self, z, deriv=0, prec=30):
        """Point value with relative error ≤ 10^(-prec+2) (2 guard digits),
        escalating working precision against cancellation."""
        if deriv > MAX_DERIV:
            raise ValueError("derivative order above configured maximum")
        zz_abs = abs(mp.mpc(z))
        if zz_abs == 0:
            # a[m] = y^(m)(0)/m!; exact data, so no cancellation loop needed
            # (a true zero can never meet a relative-error target).
            dps0 = max(prec + 15, 25)
            with workdps(dps0):
                a = self._grow_mpc(deriv + self.ode.order, dps0)
                fact = 1
                for s in range(1, deriv + 1):
                    fact *= s
                return +(a[deriv] * fact)
        dps = max(prec + 15, 25)
        ceiling = 64 * (prec + 30) + 200
        while True:
            M, terms, tail, peak = self._window(float(zz_abs) or 1e-30, dps,
                                                None, deriv)
            with workdps(dps + 5):
                zz = mp.mpc(z)
                if zz_abs == 0:
                    val = terms[0]
                else:
                    u = zz / mp.mpf(zz_abs)
                    acc = mp.mpc(0)
                    for t in reversed(terms):
                        acc = acc * u + t
                    val = acc
                err = tail + _roundoff_envelope(peak, len(terms), dps)
                if abs(val) > 0 and err <= abs(val) * mp.power(10, -prec):
                    return +val
            if dps >= ceiling:
                raise PrecisionExhausted(
                    "eval of %s at %s: cancellation beyond %d digits"
                    % (self.label or "ode solution", z, ceiling)
                )
            dps = 2 * dps

    def vanishing_order(self, prec=40):
        N = self.ode.order
        if self.exact:
            a = self._grow_exact(N)
            for m in range(N):
                if not a[m].is_zero:
                    return m, a[m]
            raise AssertionError("nonzero data cannot vanish through order N-1")
        with workdps(prec):
            a = self._grow_mpc(N, prec)
            scale = max(abs(c) for c in a[:N])
            if scale == 0:
                raise CurveError("numerically zero initial data")
            thresh = scale * mp.power(10, -prec + 10)
            for m in range(N):
                if abs(a[m]) > thresh:
                    return m, +a[m]
        raise PrecisionExhausted("vanishing order undecidable at %d digits" % prec)

    def is_zero_free(self):
        return None

    def key(self):
        data_key = tuple(
            (d.re, d.im) if isinstance(d, QC) else d.label for d in self.data
        )
        return ("ode", id(self.ode), data_key)


# ---------------------------------------------------------------------------
# Wronskians
# ---------------------------------------------------------------------------


class ZeroFreeExp:
    """c · exp(Q(z)) with Q(0) = 0: a certified zero-free closed form."""

    __slots__ = ("const", "exponent")

    def __init__(self, const, exponent: Polynomial):
        self.const = const  # QC or ExactConstant
        self.exponent = exponent

    def eval(self, z, deriv=0, prec=30):
        if deriv:
            raise ValueError("derivatives of closed-form Wronskians not needed")
        return self.const.to_mpc() * mp.exp(self.exponent(mp.mpc(z)))

    def vanishing_order(self):
        return 0, self.const

    def is_zero_free(self):
        return True


def ring_det(rows):
    """Determinant over a commutative ring (Polynomial / ExpPolynomial / QC)
    by minor expansion with memoization on column subsets."""
    n = len(rows)
    cache = {}

    def minor(r, cols):
        if len(cols) == 1:
            return rows[r][cols[0]]
        key = (r, cols)
        if key in cache:
            return cache[key]
        acc = None
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        cache[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def derivative_matrix(fns, z, prec=30):
    """Numeric matrix [f_j^{(k)}(z)] with rows k = 0..len(fns)-1."""
    size = len(fns)
    return [[f.eval(z, deriv=k, prec=prec) for f in fns] for k in range(size)]


def wronskian_at(fns, z, prec=30):
    """Numeric Wronskian value by Gaussian elimination at working precision."""
    with workdps(prec + 10):
        m = derivative_matrix(fns, z, prec=prec)
        return _complex_det(m)


def _complex_det(m):
    n = len(m)
    m = [row[:] for row in m]
    det = mp.mpc(1)
    for col in range(n):
        piv, mag = None, -1
        for i in range(col, n):
            a = abs(m[i][col])
            if a > mag:
                piv, mag = i, a
        if mag == 0:
            return mp.mpc(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] * inv
            for j in range(col, n):
                m[i][j] -= f * m[col][j]
    return det


def wronskian_symbolic(fns):
    """Exact Wronskian when all components are Polynomial or ExpPolynomial.

    Returns a Polynomial or ExpPolynomial; None if the mix is unsupported.
    """
    if all(isinstance(f, Polynomial) for f in fns):
        rows = []
        for k in range(len(fns)):
            rows.append([_nth_derivative(f, k) for f in fns])
        return ring_det(rows)
    if all(isinstance(f, (Polynomial, ExpPolynomial)) for f in fns):
        lifted = [
            f if isinstance(f, ExpPolynomial) else ExpPolynomial({QC_ZERO: f})
            for f in fns
        ]
        rows = []
        for k in range(len(lifted)):
            rows.append([_nth_derivative(f, k) for f in lifted])
        return ring_det(rows)
    return None


def _nth_derivative(f, k):
    for _ in range(k):
        f = f.derivative()
    return f


def shared_equation(fns):
    """The common LinearODE if every component is an OdeSolution of the same
    equation and the count equals its order; None otherwise."""
    if not all(isinstance(f, OdeSolution) for f in fns):
        return None
    ode = fns[0].ode
    if any(f.ode != ode for f in fns[1:]):
        return None
    if len(fns) != ode.order:
        return None
    return ode


def wronskian_closed_form(fns):
    """Closed-form Wronskian, or None when only the numeric route exists.

    Shared-equation fundamental systems use the Abel identity
    W(z) = W(0)·exp(∫ P_{N-1}); the integral of the top coefficient is exact.
    """
    ode = shared_equation(fns)
    if ode is not None:
        rows = []
        fact = 1
        for k in range(ode.order):
            if k:
                fact *= k
            rows.append([f.data[k] for f in fns])
        if all(isinstance(d, QC) for row in rows for d in row):
            w0 = qc_det(rows)
            if w0.is_zero:
                return None
            return ZeroFreeExp(w0, ode.ode_indicator_exponent())
        with workdps(60):
            m = [[d.to_mpc() for d in row] for row in rows]
            det = _complex_det(m)
            scale = max(abs(x) for row in m for x in row) or mp.mpf(1)
            if abs(det) <= scale ** len(rows) * mp.power(10, -40):
                return None
            det_fixed = +det
        return ZeroFreeExp(
            ExactConstant(lambda rows=rows: _complex_det(
                [[d.to_mpc() for d in row] for row in rows]
            ), "wronskian-initial-det"),
            ode.ode_indicator_exponent(),
        )
    return wronskian_symbolic(fns)


def wronskian_series(fns, M, prec=60):
    """Truncated Taylor series of the Wronskian through order M.

    Exact QC list when every component has an exact series; otherwise mpc.
    """
    size = len(fns)
    need = M + size
    base = []
    exact = True
    for f in fns:
        s = f.exact_taylor(need) if hasattr(f, "exact_taylor") else None
        if s is None:
            exact = False
            break
        base.append(s)
    if not exact:
        with workdps(prec):
            base = []
            for f in fns:
                if isinstance(f, OdeSolution):
                    a = f._grow_mpc(need, prec)
                    base.append([+c for c in a[: need + 1]])
                else:
                    ex = f.exact_taylor(need)
                    base.append([c.to_mpc() for c in ex])

    def shift(series, k):
        out = []
        for m in range(M + 1):
            w = 1
            for s in range(1, k + 1):
                w *= m + s
            c = series[m + k]
            out.append(c * w)
        return out

    def ser_mul(a, b):
        if a is None or b is None:
            return None
        zero = QC_ZERO if exact else mp.mpc(0)
        out = [zero] * (M + 1)
        for i, x in enumerate(a):
            if (x.is_zero if exact else x == 0):
                continue
            for j in range(0, M + 1 - i):
                out[i + j] = out[i + j] + x * b[j]
        return out

    import itertools

    zero = QC_ZERO if exact else mp.mpc(0)
    acc = [zero] * (M + 1)
    cols = list(range(size))
    for perm in itertools.permutations(cols):
        sign = _perm_sign(perm)
        prod = None
        for k, jcol in enumerate(perm):
            s = shift(base[jcol], k)
            prod = s if prod is None else ser_mul(prod, s)
        for m in range(M + 1):
            acc[m] = acc[m] + (prod[m] if sign > 0 else -prod[m])
    return acc, exact


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def wronskian_vanishing_order(fns, prec=60, budget=256):
    """(order, leading coefficient) of the Wronskian at 0 via series scan."""
    M = 8
    while M <= budget:
        series, exact = wronskian_series(fns, M, prec=prec)
        if exact:
            for m, c in enumerate(series):
                if not c.is_zero:
                    return m, c
        else:
            with workdps(prec):
                scale = max(abs(c) for c in series)
                if scale > 0:
                    thresh = scale * mp.power(10, -prec + 12)
                    for m, c in enumerate(series):
                        if abs(c) > thresh:
                            return m, +c
        M *= 2
    raise PrecisionExhausted(
        "Wronskian vanishing order not certified within %d terms" % budget
    )


# ---------------------------------------------------------------------------
# Holomorphic curves
# ---------------------------------------------------------------------------


class HolomorphicCurve:
    """Reduced representation of a holomorphic curve into projective space.

    Construction certifies linear non-degeneracy and reducedness with the
    strongest argument the component mix supports, and records which one.
    """

    def __init__(self, components, label="curve", check=True):
        self.components = tuple(components)
        if len(self.components) < 2:
            raise CurveError("a projective curve needs at least 2 components")
        self.label = label
        self.n = len(self.components) - 1
        self.independence_proof = None
        self.reducedness_proof = None
        self._wronskian = None
        self._wronskian_done = False
        if check:
            self._certify_independence()
            self._certify_reduced()

    # -- structure certificates --------------------------------------------

    def wronskian(self):
        if not self._wronskian_done:
            self._wronskian = wronskian_closed_form(self.components)
            self._wronskian_done = True
        return self._wronskian

    def _certify_independence(self):
        w = self.wronskian()
        if isinstance(w, ZeroFreeExp):
            self.independence_proof = "initial-data determinant nonzero (Abel)"
            return
        if isinstance(w, (Polynomial, ExpPolynomial)):
            if w.is_zero:
                raise CurveError("components are linearly dependent "
                                 "(symbolic Wronskian vanishes)")
            self.independence_proof = "symbolic Wronskian nonzero"
            return
        ode = shared_equation(self.components)
        if ode is not None:
            raise CurveError("components are linearly dependent "
                             "(initial-data determinant vanishes)")
        val = wronskian_at(self.components, mp.mpc("0.73", "0.41"), prec=50)
        if abs(val) <= mp.power(10, -30):
            raise CurveError("Wronskian numerically zero at the sample point; "
                             "treating the curve as degenerate")
        self.independence_proof = "numeric Wronskian sample nonzero"

    def _certify_reduced(self):
        comps = self.components
        if all(isinstance(f, Polynomial) for f in comps):
            g = comps[0]
            for f in comps[1:]:
                g = g.gcd(f)
            if g.degree > 0:
                raise CurveError("polynomial components share a factor; "
                                 "representation is not reduced")
            self.reducedness_proof = "exact gcd of components is constant"
            return
        if isinstance(self.wronskian(), ZeroFreeExp) and shared_equation(comps):
            self.reducedness_proof = ("fundamental system of one equation: "
                                      "zero-free Wronskian forbids common zeros")
            return
        for f in comps:
            if f.is_zero_free():
                self.reducedness_proof = "a component is zero-free"
                return
        raise CurveError(
            "cannot certify reducedness for this component mix; supply a "
            "curve with a zero-free component, all-polynomial components, "
            "or a fundamental system of a single equation"
        )

    def value_at_origin(self, prec=30):
        with workdps(prec + 10):
            return [
                f.eval(0, prec=prec) if not isinstance(f, Polynomial)
                else f(QC_ZERO).to_mpc()
                for f in self.components
            ]

    def key(self):
        return tuple(f.key() for f in self.components)


# ---------------------------------------------------------------------------
# The logarithmic-derivative quotient identity
# ---------------------------------------------------------------------------


def log_wronskian_quotient_residual(fns, z, j=0, prec=30):
    """Residual |d/dz log(W_j/W_n) − W_{j,n}·W/(W_j·W_n)| at z.

    W uses all functions; W_j drops f_j; W_n drops the last; W_{j,n} drops
    both (empty product = 1).  The derivative side is computed independently:
    symbolically for polynomial input, else by step-controlled central
    finite differences.  The quotient side always uses numeric determinants
    of derivative values, so polynomial input genuinely exercises two routes.
    """
    n = len(fns) - 1
    if not 0 <= j < n:
        raise ValueError("j must index one of the first n functions")
    sub_j = [f for i, f in enumerate(fns) if i != j]
    sub_n = list(fns[:-1])
    sub_jn = [f for i, f in enumerate(fns[:-1]) if i != j]

    with workdps(prec + 15):
        zz = mp.mpc(z)
        w_all = wronskian_at(fns, zz, prec=prec)
        w_j = wronskian_at(sub_j, zz, prec=prec)
        w_n = wronskian_at(sub_n, zz, prec=prec)
        w_jn = wronskian_at(sub_jn, zz, prec=prec) if sub_jn else mp.mpc(1)
        if abs(w_j) == 0 or abs(w_n) == 0:
            raise ZeroDivisionError(
                "a denominator Wronskian vanishes at the sample point"
            )
        rhs = w_jn * w_all / (w_j * w_n)

        if all(isinstance(f, Polynomial) for f in fns):
            pj = wronskian_symbolic(sub_j)
            pn = wronskian_symbolic(sub_n)
            num = pj.derivative() * pn - pj * pn.derivative()
            lhs = num(zz) / (pj(zz) * pn(zz))
        else:
            lhs = _fd_log_quotient_derivative(sub_j, sub_n, zz, prec)
        return abs(lhs - rhs)


def _fd_log_quotient_derivative(sub_j, sub_n, z, prec):
    """Fourth-order central difference of log(W_j/W_n) with step halving."""

    def logq(w):
        a = wronskian_at(sub_j, w, prec=prec + 10)
        b = wronskian_at(sub_n, w, prec=prec + 10)
        return mp.log(a / b)

    def branch_align(vals, ref):
        out = []
        for v in vals:
            k = mp.nint((ref.imag - v.imag) / (2 * mp.pi))
            out.append(v + 2j * mp.pi * k)
        return out

    est = None
    h = mp.power(10, -max(4, prec // 4))
    for _ in range(3):
        pts = [z - 2 * h, z - h, z + h, z + 2 * h]
        ref = logq(z)
        f = branch_align([logq(w) for w in pts], ref)
        cur = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
        if est is not None and abs(cur - est) <= mp.power(10, -prec // 2 - 2) * (
            1 + abs(cur)
        ):
            return cur
        est = cur
        h /= 8
    return est
