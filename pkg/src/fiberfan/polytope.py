"""Dual-description convex polytopes with exact rational coordinates.

A :class:`Polytope` may be created from inequalities (:class:`HPolytope`) or
from points (:class:`VPolytope`); the other description is computed lazily by
the double description method and cached.  The canonical H-description is
always recomputed from the vertices, so facets are irredundant and facet
normals are primitive integer vectors lying in the direction space of the
affine hull.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import lp
from .dd import extreme_rays
from .errors import DimensionMismatchError, EmptyPolytopeError, UnboundedError
from .exact import (
    AffineLattice,
    affine_hull,
    dot,
    format_rational,
    from_lattice_coordinates,
    integerize,
    kernel_basis,
    lattice_coordinates,
    matvec,
    parse_rational,
    primitive,
    q,
    qvec,
    rank,
    solve_affine,
    vadd,
    vscale,
    vsub,
)


@dataclass(frozen=True)
class HPolytope:
    """``{x : a.x <= b for (a, b) in inequalities, c.x = e for (c, e) in equations}``."""

    ambient_dim: int
    inequalities: tuple = ()
    equations: tuple = ()

    def __post_init__(self):
        d = self.ambient_dim
        ineqs = []
        for a, b in self.inequalities:
            a, b = qvec(a), q(b)
            if len(a) != d:
                raise DimensionMismatchError(f"inequality of length {len(a)} in ambient dimension {d}")
            if not any(a) and b >= 0:
                continue
            ineqs.append((a, b))
        eqs = []
        for c, e in self.equations:
            c, e = qvec(c), q(e)
            if len(c) != d:
                raise DimensionMismatchError(f"equation of length {len(c)} in ambient dimension {d}")
            eqs.append((c, e))
        object.__setattr__(self, "inequalities", tuple(ineqs))
        object.__setattr__(self, "equations", tuple(eqs))

    @property
    def trivially_empty(self) -> bool:
        """True when some constraint reads ``0 <= b`` with ``b < 0`` or ``0 = e`` with ``e != 0``."""
        return any(not any(a) for a, _ in self.inequalities) or any(
            not any(c) and e != 0 for c, e in self.equations)

    def contains(self, x) -> bool:
        x = qvec(x)
        return all(dot(a, x) <= b for a, b in self.inequalities) and all(
            dot(c, x) == e for c, e in self.equations)

    def lp_args(self):
        return ([a for a, _ in self.inequalities], [b for _, b in self.inequalities],
                [c for c, _ in self.equations], [e for _, e in self.equations])


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of an irredundant, canonically sorted vertex list."""

    ambient_dim: int
    vertices: tuple

    def __post_init__(self):
        verts = tuple(sorted({qvec(v) for v in self.vertices}))
        if any(len(v) != self.ambient_dim for v in verts):
            raise DimensionMismatchError("vertex of wrong length")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_points(cls, points: Iterable[Sequence], ambient_dim: int | None = None) -> "VPolytope":
        """Hull-reduce an arbitrary finite point set."""
        pts = sorted({qvec(p) for p in points})
        if not pts:
            raise EmptyPolytopeError("no points")
        d = len(pts[0]) if ambient_dim is None else ambient_dim
        return cls(d, _HullData.from_points(pts).vertices)


@dataclass(frozen=True)
class Face:
    parent: "Polytope"
    vertex_indices: tuple
    dim: int

    @property
    def vertices(self):
        return tuple(self.parent.vertices[i] for i in self.vertex_indices)

    def polytope(self) -> "Polytope":
        return Polytope(v=VPolytope(self.parent.ambient_dim, self.vertices))


class _HullData:
    """Affine hull, lattice coordinates, facets and incidences of a point set."""

    def __init__(self, vertices, base, lattice_basis, equations, facets, incidence, facet_normals_y):
        self.vertices = vertices
        self.base = base
        self.lattice_basis = lattice_basis
        self.equations = equations
        self.facets = facets
        self.incidence = incidence
        self.facet_normals_y = facet_normals_y
        self.dim = len(lattice_basis)

    @classmethod
    def from_points(cls, pts):
        pts = sorted({qvec(p) for p in pts})
        d = len(pts[0])
        base, dirs = affine_hull(pts)
        if dirs:
            eq_normals = kernel_basis(dirs, d)
        else:
            eq_normals = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        equations = tuple((tuple(Fraction(x) for x in c), dot(c, base)) for c in eq_normals)
        if eq_normals:
            K = kernel_basis(eq_normals, d)
        else:
            K = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        p = len(K)
        if p == 0:
            return cls((pts[0],), base, (), equations, (), (), ())
        ys = [lattice_coordinates(x, base, K) for x in pts]
        rows = [integerize(tuple(-yi for yi in y) + (Fraction(1),)) for y in ys]
        rays = extreme_rays(rows, p + 1)
        facets_y = [(r[:p], r[p]) for r in rays if any(r[:p])]
        tight = [[dot(a, y) == beta for a, beta in facets_y] for y in ys]
        keep = [i for i in range(len(pts))
                if rank([facets_y[j][0] for j, t in enumerate(tight[i]) if t] or [[0] * p]) == p]
        vertices = tuple(pts[i] for i in keep)
        ys = [ys[i] for i in keep]
        # x-space normal n = K^T z with K K^T z = a, so n . (K^T y) = a . y
        KKt = [[sum(a * b for a, b in zip(ki, kj)) for kj in K] for ki in K]
        facets = []
        for a, beta in facets_y:
            z = solve_affine(KKt, a)
            n = [Fraction(0)] * d
            for zi, ki in zip(z, K):
                for j, kj in enumerate(ki):
                    n[j] += zi * kj
            prim = primitive(n)
            nz = next(j for j, x in enumerate(n) if x)
            scale = Fraction(prim[nz]) / n[nz]
            rhs = scale * (dot(n, base) + beta)
            facets.append((tuple(Fraction(x) for x in prim), rhs, a, beta))
        facets.sort(key=lambda f: (f[0], f[1]))
        incidence = tuple(
            sum(1 << i for i, y in enumerate(ys) if dot(f[2], y) == f[3]) for f in facets)
        return cls(vertices, base, tuple(K), equations,
                   tuple((f[0], f[1]) for f in facets), incidence, tuple((f[2], f[3]) for f in facets))


def _h_to_vertices(h: HPolytope):
    d = h.ambient_dim
    if h.trivially_empty:
        raise EmptyPolytopeError("constraint 0 <= b with b < 0")
    if h.equations:
        C = [c for c, _ in h.equations]
        x0 = solve_affine(C, [e for _, e in h.equations])
        if x0 is None:
            raise EmptyPolytopeError("inconsistent equations")
        K = kernel_basis(C, d)
    else:
        x0 = tuple(Fraction(0) for _ in range(d))
        K = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    p = len(K)
    A = [tuple(dot(a, k) for k in K) for a, _ in h.inequalities]
    b = [bb - dot(a, x0) for a, bb in h.inequalities]
    if p == 0:
        if all(x >= 0 for x in b):
            return [x0]
        raise EmptyPolytopeError("point violates an inequality")
    if rank(A) < p:
        if lp.is_feasible(p, A, b):
            raise UnboundedError("constraint system has a lineality direction")
        raise EmptyPolytopeError("infeasible constraint system")
    rows = [integerize(tuple(-x for x in a) + (bb,)) for a, bb in zip(A, b)]
    rows.append(tuple([0] * p + [1]))
    rays = extreme_rays(rows, p + 1)
    verts = []
    recession = False
    for r in rays:
        if r[p] == 0:
            recession = True
        else:
            y = tuple(Fraction(x, r[p]) for x in r[:p])
            verts.append(from_lattice_coordinates(y, x0, K))
    if not verts:
        raise EmptyPolytopeError("infeasible constraint system")
    if recession:
        raise UnboundedError("polytope has a recession direction")
    return sorted(set(verts))


class Polytope:
    """A bounded convex polytope holding whichever descriptions are known.

    ``h`` is the constraint system the polytope was built from (if any); the
    canonical irredundant description is :attr:`hrep`.
    """

    def __init__(self, h: HPolytope | None = None, v: VPolytope | None = None):
        if h is None and v is None:
            raise ValueError("need an H- or V-description")
        if h is not None and v is not None and h.ambient_dim != v.ambient_dim:
            raise DimensionMismatchError("H and V descriptions disagree on ambient dimension")
        self.input_h = h
        self._v = v
        self.ambient_dim = h.ambient_dim if h is not None else v.ambient_dim

    @classmethod
    def from_points(cls, points, ambient_dim=None) -> "Polytope":
        return cls(v=VPolytope.from_points(points, ambient_dim))

    @classmethod
    def from_inequalities(cls, ambient_dim, inequalities, equations=()) -> "Polytope":
        return cls(h=HPolytope(ambient_dim, tuple(inequalities), tuple(equations)))

    def __repr__(self):
        return f"Polytope(ambient_dim={self.ambient_dim}, n_vertices={len(self.vertices)})"

    @cached_property
    def vrep(self) -> VPolytope:
        if self._v is not None:
            return self._v
        return VPolytope(self.ambient_dim, _h_to_vertices(self.input_h))

    @property
    def vertices(self):
        return self._hull.vertices

    @cached_property
    def _hull(self) -> _HullData:
        data = _HullData.from_points(self.vrep.vertices)
        return data

    @cached_property
    def hrep(self) -> HPolytope:
        hd = self._hull
        return HPolytope(self.ambient_dim, hd.facets, hd.equations)

    @property
    def h(self) -> HPolytope:
        """A constraint description: the input one when available, else the canonical one."""
        return self.input_h if self.input_h is not None else self.hrep

    @property
    def dim(self) -> int:
        return self._hull.dim

    @property
    def facets(self):
        return self._hull.facets

    @property
    def equations(self):
        return self._hull.equations

    @property
    def incidence(self):
        """Vertex bitmask of each canonical facet (bit ``i`` = vertex ``i``)."""
        return self._hull.incidence

    @property
    def lattice_basis(self):
        """Integer basis of the direction space of the affine hull intersected with ``Z^d``."""
        return self._hull.lattice_basis

    def lattice_coords(self, x):
        return lattice_coordinates(x, self._hull.base, self._hull.lattice_basis)

    def contains(self, x) -> bool:
        return self.hrep.contains(x)

    def same_set(self, other: "Polytope") -> bool:
        return self.ambient_dim == other.ambient_dim and self.vertices == other.vertices

    # -- face lattice --------------------------------------------------

    def _facets_of(self, mask: int) -> list[int]:
        memo = self.__dict__.setdefault("_facets_memo", {})
        if mask in memo:
            return memo[mask]
        cands = {mask & f for f in self.incidence} - {mask, 0}
        out = sorted(c for c in cands if not any(c != o and c & o == c for o in cands))
        memo[mask] = out
        return out

    @cached_property
    def face_lattice(self) -> dict[int, list[int]]:
        """Map from dimension to the vertex masks of the faces of that dimension."""
        top = (1 << len(self.vertices)) - 1
        levels = {self.dim: [top]}
        current = [top]
        for k in range(self.dim, 0, -1):
            nxt = set()
            for f in current:
                nxt.update(self._facets_of(f))
            current = sorted(nxt)
            levels[k - 1] = current
        return levels

    def triangulation(self) -> list[tuple[int, ...]]:
        """Pulling triangulation from the first canonical vertex, recursively on faces."""
        memo = {}

        def tri(mask, k):
            key = (mask, k)
            if key in memo:
                return memo[key]
            low = (mask & -mask).bit_length() - 1
            if k == 0:
                out = [(low,)]
            else:
                out = []
                for g in self._facets_of(mask):
                    if not g >> low & 1:
                        out.extend((low,) + s for s in tri(g, k - 1))
            memo[key] = out
            return out

        return tri((1 << len(self.vertices)) - 1, self.dim)


# ---------------------------------------------------------------------------
# operations

def as_polytope(P) -> Polytope:
    if isinstance(P, Polytope):
        return P
    if isinstance(P, HPolytope):
        return Polytope(h=P)
    if isinstance(P, VPolytope):
        return Polytope(v=P)
    raise TypeError(f"not a polytope: {P!r}")


def to_v(h: HPolytope) -> VPolytope:
    """Irredundant vertices of a bounded H-polytope (raises on empty or unbounded input)."""
    return as_polytope(h).vrep


def to_h(v: VPolytope) -> HPolytope:
    return as_polytope(v).hrep


def dimension(P) -> int:
    return as_polytope(P).dim


def faces(P, k: int) -> list[Face]:
    P = as_polytope(P)
    if not 0 <= k <= P.dim:
        raise ValueError(f"face dimension {k} outside [0, {P.dim}]")
    out = []
    for mask in P.face_lattice[k]:
        idx = tuple(i for i in range(len(P.vertices)) if mask >> i & 1)
        out.append(Face(P, idx, k))
    return out


def edges(P) -> list[tuple[int, int]]:
    P = as_polytope(P)
    if P.dim < 1:
        return []
    return [f.vertex_indices for f in faces(P, 1)]


def intersect(P: HPolytope, Q: HPolytope) -> HPolytope:
    """Concatenate both constraint systems and drop redundant rows by exact LP."""
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatchError("ambient dimensions differ")
    d = P.ambient_dim
    eqs = []
    for c, e in P.equations + Q.equations:
        if eqs and rank([cc for cc, _ in eqs] + [c]) == len(eqs):
            if solve_affine([cc for cc, _ in eqs], [ee for _, ee in eqs]) is not None and \
                    solve_affine([cc for cc, _ in eqs] + [c], [ee for _, ee in eqs] + [e]) is not None:
                continue
        eqs.append((c, e))
    ineqs = list(dict.fromkeys(P.inequalities + Q.inequalities))
    A_eq = [c for c, _ in eqs]
    b_eq = [e for _, e in eqs]
    if not lp.is_feasible(d, [a for a, _ in ineqs], [b for _, b in ineqs], A_eq, b_eq):
        return HPolytope(d, tuple(ineqs), tuple(eqs))
    i = 0
    while i < len(ineqs):
        a, b = ineqs[i]
        rest = ineqs[:i] + ineqs[i + 1:]
        res = lp.maximize(a, [r[0] for r in rest], [r[1] for r in rest], A_eq, b_eq)
        if res.status == lp.OPTIMAL and res.value <= b:
            ineqs.pop(i)
        else:
            i += 1
    return HPolytope(d, tuple(ineqs), tuple(eqs))


def affine_image(P, matrix: Sequence[Sequence], offset: Sequence | None = None) -> Polytope:
    P = as_polytope(P)
    M = [qvec(r) for r in matrix]
    if M and len(M[0]) != P.ambient_dim:
        raise DimensionMismatchError("matrix columns do not match ambient dimension")
    off = qvec(offset) if offset is not None else tuple(Fraction(0) for _ in M)
    pts = [vadd(matvec(M, v), off) for v in P.vertices]
    return Polytope.from_points(pts, len(M))


def image(P, L: Sequence[Sequence]) -> Polytope:
    """Convex hull of the images of the vertices of ``P`` under the linear map ``L``."""
    return affine_image(P, L)


def minkowski_weighted(terms: Sequence[tuple], deadline=None) -> VPolytope:
    """``sum(w_i * P_i)`` by incremental pairwise sums with hull reduction."""
    if not terms:
        raise ValueError("empty Minkowski sum")
    dims = {as_polytope(P).ambient_dim for _, P in terms}
    if len(dims) != 1:
        raise DimensionMismatchError("summands live in different ambient spaces")
    d = dims.pop()
    acc = None
    for w, P in terms:
        w = q(w)
        if w <= 0:
            raise ValueError("Minkowski weights must be positive")
        pts = [vscale(w, v) for v in as_polytope(P).vertices]
        if acc is None:
            acc = VPolytope.from_points(pts, d).vertices
        else:
            acc = VPolytope.from_points((vadd(a, b) for a in acc for b in pts), d).vertices
        if deadline is not None:
            deadline.check("minkowski sum")
    return VPolytope(d, acc)


def barycenter(P):
    """Average of the vertices; lies in the relative interior."""
    P = as_polytope(P)
    verts = P.vertices
    n = len(verts)
    return tuple(sum(c) / n for c in zip(*verts))


def _simplex_volume(ys) -> Fraction:
    p = len(ys) - 1
    if p == 0:
        return Fraction(1)
    M = [vsub(y, ys[0]) for y in ys[1:]]
    return abs(_det(M)) / math.factorial(p)


def _det(M) -> Fraction:
    M = [list(r) for r in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def _weighted_simplices(P: Polytope):
    ys = [P.lattice_coords(v) for v in P.vertices]
    return [(_simplex_volume([ys[i] for i in s]), s) for s in P.triangulation()]


def normalized_volume(P) -> Fraction:
    """Volume in the lattice induced on the affine hull (fundamental cell = 1; a point has volume 1)."""
    P = as_polytope(P)
    if P.dim == 0:
        return Fraction(1)
    return sum((v for v, _ in _weighted_simplices(P)), Fraction(0))


def centroid(P):
    """Center of mass, from the same triangulation as :func:`normalized_volume`."""
    P = as_polytope(P)
    if P.dim == 0:
        return P.vertices[0]
    total = Fraction(0)
    acc = [Fraction(0)] * P.ambient_dim
    for vol, s in _weighted_simplices(P):
        total += vol
        for i in s:
            for j, x in enumerate(P.vertices[i]):
                acc[j] += vol * x / len(s)
    return tuple(a / total for a in acc)


def dilate(P, k) -> Polytope:
    P = as_polytope(P)
    k = q(k)
    if k <= 0:
        raise ValueError("dilation factor must be positive")
    h = v = None
    if P.input_h is not None:
        h = HPolytope(P.ambient_dim, tuple((a, k * b) for a, b in P.input_h.inequalities),
                      tuple((c, k * e) for c, e in P.input_h.equations))
    if P._v is not None or "vrep" in P.__dict__:
        v = VPolytope(P.ambient_dim, tuple(vscale(k, x) for x in P.vrep.vertices))
    return Polytope(h=h, v=v)


def coordinate_bounds(h: HPolytope) -> list[tuple[Fraction, Fraction]]:
    """Exact ``(min, max)`` of every coordinate over ``h``, via LP."""
    A, b, C, e = h.lp_args()
    d = h.ambient_dim
    out = []
    for i in range(d):
        unit = [0] * d
        unit[i] = 1
        hi = lp.maximize(unit, A, b, C, e)
        lo = lp.minimize(unit, A, b, C, e)
        if hi.status == lp.INFEASIBLE:
            raise EmptyPolytopeError("infeasible constraint system")
        if hi.status == lp.UNBOUNDED or lo.status == lp.UNBOUNDED:
            raise UnboundedError(f"coordinate {i} is unbounded")
        out.append((lo.value, hi.value))
    return out


def lattice_points(P, L: AffineLattice | None = None) -> list[tuple[int, ...]]:
    """All points of the affine lattice ``L`` (default ``Z^d``) inside ``P``, sorted."""
    h = P if isinstance(P, HPolytope) else as_polytope(P).h
    d = h.ambient_dim
    if L is None:
        L = AffineLattice.full(d)
    if L.ambient_dim != d:
        raise DimensionMismatchError("lattice and polytope dimensions differ")
    if L.empty:
        return []
    try:
        bounds = coordinate_bounds(h)
    except EmptyPolytopeError:
        return []
    ranges = [range(math.ceil(lo), math.floor(hi) + 1) for lo, hi in bounds]
    ineqs = [(integerize(tuple(a) + (b,))) for a, b in h.inequalities]
    eqs = [(integerize(tuple(c) + (e,))) for c, e in h.equations]
    out = []
    for x in itertools.product(*ranges):
        if all(dot(r[:-1], x) == r[-1] for r in eqs) and all(dot(r[:-1], x) <= r[-1] for r in ineqs) \
                and x in L:
            out.append(tuple(x))
    return out


# ---------------------------------------------------------------------------
# JSON

def polytope_to_json(P) -> dict:
    P = as_polytope(P)
    h = P.hrep
    fmt = lambda row: [format_rational(x) for x in row]  # noqa: E731
    return {
        "ambient_dim": P.ambient_dim,
        "inequalities": [fmt(tuple(a) + (b,)) for a, b in h.inequalities],
        "equations": [fmt(tuple(c) + (e,)) for c, e in h.equations],
        "vertices": [fmt(v) for v in P.vertices],
    }


def polytope_from_json(obj: dict, strict: bool = True) -> Polytope:
    d = int(obj["ambient_dim"])
    parse = lambda row: tuple(parse_rational(x, strict) if isinstance(x, str) else q(x) for x in row)  # noqa: E731
    ineqs = [parse(r) for r in obj.get("inequalities") or []]
    eqs = [parse(r) for r in obj.get("equations") or []]
    verts = [parse(r) for r in obj.get("vertices") or []]
    for r in ineqs + eqs:
        if len(r) != d + 1:
            raise DimensionMismatchError(f"constraint row of length {len(r)}, expected {d + 1}")
    h = v = None
    if ineqs or eqs:
        h = HPolytope(d, tuple((r[:-1], r[-1]) for r in ineqs), tuple((r[:-1], r[-1]) for r in eqs))
    if verts:
        v = VPolytope(d, tuple(verts))
    if h is None and v is None:
        raise ValueError("polytope JSON needs inequalities or vertices")
    return Polytope(h=h, v=v)
