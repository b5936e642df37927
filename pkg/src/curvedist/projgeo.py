"""Projective-space incidence geometry for hyperplane systems.

Hyperplanes are stored by their defining vectors exactly as given
(normalization happens on the fly at the working precision).  Rank
decisions are exact Gaussian elimination whenever every entry is an exact
rational; otherwise modified Gram-Schmidt with a documented residual
threshold of 10^(-prec/2).  Flats of every codimension are enumerated from
admissible subsets and deduplicated by the projector onto their defining
span, so the same intersection reached through different subsets appears
exactly once.

Distances follow the Fubini-Study chordal convention: the distance from a
projective point w to a hyperplane is |<alpha, w>| / (|alpha| |w|), and to a
flat it is the norm of the orthogonal projection of w/|w| onto the span of
the flat's defining vectors.  Orthonormal bases are cached per working
precision; reusing a low-precision basis would poison distances that live
hundreds of orders of magnitude below the vector scale.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .entire import workdps
from .exactnum import QC, ExactConstant, qc_matrix_rank

DEFAULT_SUBSET_CAP = 16


class GeometryError(ValueError):
    pass


def _pairing(alpha, w):
    """Sesquilinear pairing sum(conj(alpha_j) * w_j) for mpc sequences."""
    acc = mp.mpc(0)
    for a, x in zip(alpha, w):
        acc += mp.conj(a) * x
    return acc


def _norm(vec):
    return mp.sqrt(sum((abs(x) ** 2 for x in vec), mp.mpf(0)))


class Hyperplane:
    """A hyperplane of projective n-space, defined by a nonzero vector."""

    def __init__(self, vector, name=""):
        self.vector = tuple(
            v if isinstance(v, ExactConstant) else QC.parse(v) for v in vector
        )
        if len(self.vector) < 2:
            raise GeometryError("hyperplane vectors need at least 2 entries")
        self.exact = all(isinstance(v, QC) for v in self.vector)
        if self.exact and all(v.is_zero for v in self.vector):
            raise GeometryError("hyperplane vector must be nonzero")
        self.name = name
        self._lock = threading.RLock()
        self._mpc = {}

    @property
    def dim(self):
        return len(self.vector)

    def mpc_vector(self, dps):
        with self._lock:
            v = self._mpc.get(dps)
            if v is None:
                with workdps(dps):
                    v = tuple(x.to_mpc() for x in self.vector)
                self._mpc[dps] = v
            return v

    def norm(self, dps):
        with workdps(dps):
            return _norm(self.mpc_vector(dps))

    def section_data(self):
        """Conjugated vector: initial data / coefficients of g = <alpha, f>."""
        out = []
        for v in self.vector:
            if isinstance(v, QC):
                out.append(v.conj())
            else:
                out.append(ExactConstant(
                    lambda f=v.factory: mp.conj(mp.mpc(f())),
                    "conj(%s)" % v.label,
                ))
        return tuple(out)

    def __repr__(self):
        return "Hyperplane(%s)" % (self.name or self.vector,)


def _numeric_rank(vector_rows, dps, tol_digits):
    """Rank by modified Gram-Schmidt with residual threshold 10^-tol_digits."""
    with workdps(dps):
        tol = mp.power(10, -tol_digits)
        basis = []
        rank = 0
        for row in vector_rows:
            v = [mp.mpc(x) for x in row]
            scale = _norm(v)
            if scale == 0:
                continue
            for _ in range(2):
                for b in basis:
                    c = _pairing(b, v)
                    v = [x - c * y for x, y in zip(v, b)]
            res = _norm(v)
            if res > tol * scale:
                basis.append([x / res for x in v])
                rank += 1
        return rank


def _rank(planes, dps, prec):
    rows = [p.vector for p in planes]
    if all(p.exact for p in planes):
        return qc_matrix_rank(rows)
    return _numeric_rank(
        [p.mpc_vector(dps) for p in planes], dps, max(4, prec // 2)
    )


class HyperplaneSystem:
    """A named, ordered, finite set of hyperplanes in one projective space."""

    def __init__(self, planes, name="system"):
        self.planes = tuple(planes)
        if not self.planes:
            raise GeometryError("empty hyperplane system")
        d = self.planes[0].dim
        if any(p.dim != d for p in self.planes):
            raise GeometryError("mixed ambient dimensions in one system")
        seen = set()
        for p in self.planes:
            if p.name in seen:
                raise GeometryError("duplicate hyperplane name %r" % p.name)
            seen.add(p.name)
        self.name = name

    @property
    def dim(self):
        """Ambient vector-space dimension n+1."""
        return self.planes[0].dim

    @property
    def n(self):
        return self.dim - 1

    def __len__(self):
        return len(self.planes)

    def __getitem__(self, key):
        if isinstance(key, str):
            for p in self.planes:
                if p.name == key:
                    return p
            raise KeyError(key)
        return self.planes[key]

    def names(self):
        return [p.name for p in self.planes]

    def subsystem(self, names, name=None):
        return HyperplaneSystem(
            [self[nm] for nm in names], name=name or "+".join(names)
        )

    def is_admissible(self, dps=60, prec=30):
        """Every subset of size min(q, n+1) is linearly independent."""
        k = min(len(self.planes), self.dim)
        for sub in itertools.combinations(self.planes, k):
            if _rank(sub, dps, prec) < k:
                return False
        return True

    def is_complete(self, dps=60, prec=30):
        """The defining vectors span the whole ambient space."""
        return _rank(self.planes, dps, prec) == self.dim


class Flat:
    """Intersection of an admissible subset: stored via its defining span."""

    def __init__(self, indices, planes):
        self.indices = tuple(indices)
        self.planes = tuple(planes)
        self.codim = len(self.planes)
        self._lock = threading.RLock()
        self._onb = {}

    def onb(self, dps):
        """Orthonormal rows spanning the defining vectors, at working dps."""
        with self._lock:
            b = self._onb.get(dps)
            if b is None:
                with workdps(dps):
                    basis = []
                    for p in self.planes:
                        v = list(p.mpc_vector(dps))
                        for _ in range(2):
                            for u in basis:
                                c = _pairing(u, v)
                                v = [x - c * y for x, y in zip(v, u)]
                        nv = _norm(v)
                        if nv == 0 or nv < mp.power(10, -dps // 2):
                            raise GeometryError(
                                "flat generators numerically dependent at "
                                "%d digits" % dps
                            )
                        basis.append(tuple(x / nv for x in v))
                    b = tuple(basis)
                self._onb[dps] = b
            return b

    def signature(self):
        """Stable key identifying the span: quantized projector entries."""
        dps = 50
        u = self.onb(dps)
        with workdps(dps):
            d = len(u[0])
            quanta = []
            for a in range(d):
                for b in range(d):
                    acc = mp.mpc(0)
                    for row in u:
                        acc += row[a] * mp.conj(row[b])
                    quanta.append(int(mp.nint(acc.real * 10 ** 25)))
                    quanta.append(int(mp.nint(acc.imag * 10 ** 25)))
            return (self.codim, tuple(quanta))

    def __repr__(self):
        return "Flat(codim=%d, planes=%s)" % (
            self.codim, [p.name for p in self.planes],
        )


class FlatLattice:
    """All flats cut out by admissible subsets, deduplicated by span."""

    def __init__(self, system: HyperplaneSystem, cap=DEFAULT_SUBSET_CAP,
                 dps=60, prec=30):
        if len(system) > cap:
            raise GeometryError(
                "system has %d hyperplanes; flat enumeration capped at %d"
                % (len(system), cap)
            )
        self.system = system
        self.flats = {}          # codim -> list[Flat]
        self.top_subsets = []    # admissible subsets of size n+1 (index tuples)
        seen = {}
        n1 = system.dim
        for size in range(1, n1 + 1):
            for idxs in itertools.combinations(range(len(system)), size):
                sub = [system.planes[i] for i in idxs]
                if _rank(sub, dps, prec) < size:
                    continue
                if size == n1:
                    self.top_subsets.append(idxs)
                    continue
                flat = Flat(idxs, sub)
                sig = flat.signature()
                if sig in seen:
                    continue
                seen[sig] = flat
                self.flats.setdefault(size, []).append(flat)

    @property
    def n(self):
        return self.system.n

    def complete(self):
        """Flats exist at every codimension 1..n (d_{n+1} is trivial)."""
        return all(k in self.flats for k in range(1, self.n + 1))

    def codim_flats(self, k):
        if k == self.n + 1:
            return []
        if k not in self.flats:
            raise GeometryError("lattice has no flats of codimension %d" % k)
        return self.flats[k]


# -- point-level distances ---------------------------------------------------


def dist_point_hyperplane(plane: Hyperplane, w, dps=30):
    """|<alpha, w>| / (|alpha| |w|); w an mpc sequence, scaling-invariant."""
    with workdps(dps):
        nw = _norm(w)
        if nw == 0:
            raise GeometryError("distance from the zero vector")
        v = plane.mpc_vector(dps)
        return abs(_pairing(v, w)) / (_norm(v) * nw)


def dist_point_flat(flat: Flat, w, dps=30):
    """Norm of the projection of w/|w| onto the flat's defining span."""
    with workdps(dps):
        nw = _norm(w)
        if nw == 0:
            raise GeometryError("distance from the zero vector")
        acc = mp.mpf(0)
        for u in flat.onb(dps):
            acc += abs(_pairing(u, w)) ** 2
        return mp.sqrt(acc) / nw


def d_k(lattice: FlatLattice, w, k, dps=30):
    """(min distance, witness flat) over codim-k flats; d_{n+1} = 1."""
    if k == lattice.n + 1:
        return mp.mpf(1), None
    best, arg = None, None
    for flat in lattice.codim_flats(k):
        d = dist_point_flat(flat, w, dps=dps)
        if best is None or d < best:
            best, arg = d, flat
    return best, arg


def lemma1_ratio(lattice: FlatLattice, w, dps=30):
    """(prod_k d_k(w)) / (min over admissible (n+1)-subsets of prod dist)."""
    with workdps(dps):
        num = mp.mpf(1)
        for k in range(1, lattice.n + 1):
            num *= d_k(lattice, w, k, dps=dps)[0]
        if not lattice.top_subsets:
            raise GeometryError("no admissible subsets of full size")
        den = None
        for idxs in lattice.top_subsets:
            prod = mp.mpf(1)
            for i in idxs:
                prod *= dist_point_hyperplane(
                    lattice.system.planes[i], w, dps=dps
                )
            if den is None or prod < den:
                den = prod
        if den == 0:
            raise GeometryError("sample point lies on a hyperplane")
        return num / den


# -- float64 fast path for sampling suites -----------------------------------


@dataclass
class SamplingGeometry:
    """numpy snapshot of a system and its lattice for bulk sampling."""

    unit_planes: np.ndarray              # (q, d) unit defining vectors
    flat_onbs: dict = field(default_factory=dict)   # codim -> (nf, k, d)
    top_subsets: tuple = ()

    @classmethod
    def build(cls, lattice: FlatLattice, dps=60):
        sys_ = lattice.system
        planes = []
        for p in sys_.planes:
            v = np.array([complex(x) for x in p.mpc_vector(dps)])
            planes.append(v / np.linalg.norm(v))
        onbs = {}
        for k, flats in lattice.flats.items():
            onbs[k] = np.array([
                [[complex(x) for x in row] for row in f.onb(dps)]
                for f in flats
            ])
        return cls(
            unit_planes=np.array(planes),
            flat_onbs=onbs,
            top_subsets=tuple(lattice.top_subsets),
        )

    def hyperplane_dists(self, W):
        """(s, q) distances for sample rows W (s, d), unit-normalized rows."""
        return np.abs(W @ self.unit_planes.conj().T)

    def flat_dists(self, W, k):
        """(s, nf) distances to all codim-k flats."""
        U = self.flat_onbs[k]
        proj = np.einsum("sd,fkd->sfk", W, U.conj())
        return np.sqrt((np.abs(proj) ** 2).sum(axis=2))

    def d_k_min(self, W, k):
        return self.flat_dists(W, k).min(axis=1)

    def lemma1_ratios(self, W):
        n = self.unit_planes.shape[1] - 1
        num = np.ones(W.shape[0])
        for k in range(1, n + 1):
            num = num * self.d_k_min(W, k)
        hd = self.hyperplane_dists(W)
        den = None
        for idxs in self.top_subsets:
            prod = np.ones(W.shape[0])
            for i in idxs:
                prod = prod * hd[:, i]
            den = prod if den is None else np.minimum(den, prod)
        return num / den
