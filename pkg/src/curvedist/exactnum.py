"""Exact rational-complex scalars and small exact linear algebra.

Coefficients, initial data, and hyperplane vectors are kept as exact
Gaussian rationals whenever the input allows it, so that Taylor recurrences,
determinants, gcds, and rank decisions incur no rounding at all.  Values
that are genuinely transcendental (for example special-function initial
data) are wrapped as precision-on-demand constants instead.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp


class QC:
    """Complex number with exact Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- parsing ---------------------------------------------------------

    @classmethod
    def parse(cls, obj) -> "QC":
        """Coerce ints, Fractions, exact decimal/rational strings, or
        [re, im] pairs of those into a QC.  Floats are accepted but must be
        exactly representable intent-wise; prefer strings in files."""
        if isinstance(obj, QC):
            return obj
        if isinstance(obj, (int, Fraction)):
            return cls(obj)
        if isinstance(obj, str):
            return cls(Fraction(obj.strip()))
        if isinstance(obj, float):
            return cls(Fraction(obj))
        if isinstance(obj, complex):
            return cls(Fraction(obj.real), Fraction(obj.imag))
        if isinstance(obj, (list, tuple)) and len(obj) == 2:
            re = cls.parse(obj[0])
            im = cls.parse(obj[1])
            if re.im or im.im:
                raise ValueError("nested complex parts in pair %r" % (obj,))
            return cls(re.re, im.re)
        raise TypeError("cannot parse %r as an exact complex rational" % (obj,))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = QC.parse(other)
        return QC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QC.parse(other))

    def __rsub__(self, other):
        return QC.parse(other) + (-self)

    def __mul__(self, other):
        other = QC.parse(other)
        return QC(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QC.parse(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return QC(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return QC.parse(other) / self

    def conj(self) -> "QC":
        return QC(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- predicates / conversions ----------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, str, QC)):
            other = QC.parse(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero

    def to_mpc(self) -> mp.mpc:
        """Convert at the current mpmath working precision."""
        return mp.mpc(
            mp.mpf(self.re.numerator) / self.re.denominator,
            mp.mpf(self.im.numerator) / self.im.denominator,
        )

    def __repr__(self):
        if self.im == 0:
            return "QC(%s)" % self.re
        return "QC(%s, %s)" % (self.re, self.im)


QC_ZERO = QC(0)
QC_ONE = QC(1)


def qc_matrix_rank(rows) -> int:
    """Exact rank of a matrix of QC entries by Gaussian elimination."""
    m = [[QC.parse(x) for x in row] for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    col = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, nrows):
            if not m[i][col].is_zero:
                pivot = i
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = QC_ONE / m[rank][col]
        for i in range(rank + 1, nrows):
            if m[i][col].is_zero:
                continue
            factor = m[i][col] * inv
            for j in range(col, ncols):
                m[i][j] = m[i][j] - factor * m[rank][j]
        rank += 1
        if rank == nrows:
            break
    return rank


def qc_det(rows) -> QC:
    """Exact determinant of a square QC matrix (elimination with pivoting)."""
    m = [[QC.parse(x) for x in row] for row in rows]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant requires a square matrix")
    det = QC_ONE
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if not m[i][col].is_zero:
                pivot = i
                break
        if pivot is None:
            return QC_ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = QC_ONE / m[col][col]
        for i in range(col + 1, n):
            if m[i][col].is_zero:
                continue
            factor = m[i][col] * inv
            for j in range(col, n):
                m[i][j] = m[i][j] - factor * m[col][j]
    return det


class ExactConstant:
    """A scalar known in closed form but not rational: carried as a factory
    producing an mpmath value at the current working precision.

    `factory` must be deterministic and respect mp.mp.dps at call time.
    """

    __slots__ = ("factory", "label")

    def __init__(self, factory, label: str):
        self.factory = factory
        self.label = label

    def to_mpc(self) -> mp.mpc:
        return mp.mpc(self.factory())

    def __repr__(self):
        return "ExactConstant(%s)" % self.label


def as_scalar(obj):
    """Normalize to QC when exactly representable, else ExactConstant."""
    if isinstance(obj, (QC, ExactConstant)):
        return obj
    return QC.parse(obj)


def scalar_to_mpc(s) -> mp.mpc:
    """Evaluate a QC or ExactConstant at the current working precision."""
    return s.to_mpc()
