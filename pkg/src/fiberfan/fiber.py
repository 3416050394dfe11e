"""Fibers, chamber complexes and fiber polytopes of polytope projections.

For a projection ``pi: P -> Q = pi(P)`` the fiber over ``q`` is written in
kernel coordinates: ``x = section(q) + sum(y_i k_i)`` over an integer basis
``k_i`` of ``ker(pi)``.  The section is linear in ``q``, so fibers over
different points live in one common space and can be summed.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceededError, DimensionMismatchError, EmptyPolytopeError, OutsideImageError
from .exact import (
    AffineLattice,
    affine_hull,
    dot,
    format_rational,
    from_lattice_coordinates,
    kernel_basis,
    parse_rational,
    q,
    qvec,
    rank,
    sign_normalize,
    solve_affine,
    vsub,
)
from .fan import Fan, ambient_normal_fan, fan_equal, fan_to_json, refine_all, trivial_fan
from .polytope import (
    HPolytope,
    Polytope,
    VPolytope,
    affine_image,
    as_polytope,
    barycenter,
    centroid,
    dilate,
    lattice_points,
    minkowski_weighted,
    normalized_volume,
    polytope_to_json,
)


class Deadline:
    """Wall-clock budget; ``check`` raises :class:`BudgetExceededError` once it has passed."""

    def __init__(self, seconds: float | None):
        self.seconds = seconds
        self.start = time.monotonic()
        self.progress = {}

    def check(self, where: str):
        if self.seconds is not None and time.monotonic() - self.start > self.seconds:
            raise BudgetExceededError(f"budget of {self.seconds}s exceeded during {where}", dict(self.progress))


@dataclass(frozen=True)
class Projection:
    """Affine map ``x -> matrix . x + offset`` with an integer kernel-lattice basis."""

    matrix: tuple
    offset: tuple = None
    source_dim: int = field(default=None)
    kernel: tuple = field(init=False)

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if any(Fraction(x).denominator != 1 for row in self.matrix for x in row):
            raise ValueError("projection matrix must be integral")
        src = self.source_dim if self.source_dim is not None else (len(M[0]) if M else 0)
        if any(len(r) != src for r in M):
            raise DimensionMismatchError("projection rows have inconsistent length")
        off = qvec(self.offset) if self.offset is not None else tuple(Fraction(0) for _ in M)
        if len(off) != len(M):
            raise DimensionMismatchError("offset length differs from target dimension")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "source_dim", src)
        object.__setattr__(self, "kernel", tuple(kernel_basis(M, src)) if M else
                           tuple(tuple(int(i == j) for j in range(src)) for i in range(src)))

    @property
    def target_dim(self) -> int:
        return len(self.matrix)

    @property
    def rank(self) -> int:
        return rank(self.matrix) if self.matrix else 0

    def __call__(self, x):
        return tuple(dot(row, x) + o for row, o in zip(self.matrix, self.offset))

    def section(self, point):
        """A preimage of ``point`` that depends affinely on it, or ``None``."""
        point = qvec(point)
        if len(point) != self.target_dim:
            raise DimensionMismatchError("point has wrong dimension for the projection target")
        if not self.matrix:
            return tuple(Fraction(0) for _ in range(self.source_dim))
        return solve_affine(self.matrix, vsub(point, self.offset))

    def to_json(self) -> dict:
        out = {"matrix": [list(r) for r in self.matrix]}
        if any(self.offset):
            out["offset"] = [format_rational(x) for x in self.offset]
        return out

    @classmethod
    def from_json(cls, obj: dict, strict: bool = True) -> "Projection":
        off = obj.get("offset")
        if off is not None:
            off = [parse_rational(x, strict) if isinstance(x, str) else q(x) for x in off]
        rows = obj["matrix"]
        return cls(tuple(tuple(r) for r in rows), off, source_dim=obj.get("source_dim"))


def identity_projection(d: int) -> Projection:
    return Projection(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))


def _check_dims(P, pi):
    if P.ambient_dim != pi.source_dim:
        raise DimensionMismatchError(
            f"polytope lives in dimension {P.ambient_dim}, projection expects {pi.source_dim}")


def fiber_h(P, pi: Projection, point) -> tuple[HPolytope, tuple]:
    """Constraint system of the fiber in kernel coordinates, plus the base point."""
    P = as_polytope(P)
    _check_dims(P, pi)
    x0 = pi.section(point)
    if x0 is None:
        raise OutsideImageError(f"{[format_rational(x) for x in point]} is not in the affine image")
    K = pi.kernel
    h = P.h
    ineqs = tuple((tuple(dot(a, k) for k in K), b - dot(a, x0)) for a, b in h.inequalities)
    eqs = tuple((tuple(dot(c, k) for k in K), e - dot(c, x0)) for c, e in h.equations)
    return HPolytope(len(K), ineqs, eqs), x0


def fiber_over(P, pi: Projection, point) -> Polytope:
    """``P ∩ pi^{-1}(point)`` in kernel coordinates."""
    h, x0 = fiber_h(P, pi, point)
    if h.ambient_dim == 0:
        if all(b >= 0 for _, b in h.inequalities) and all(e == 0 for _, e in h.equations):
            return Polytope(v=VPolytope(0, ((),)))
        raise OutsideImageError("point is not in the image of the polytope")
    F = Polytope(h=h)
    try:
        F.vertices
    except EmptyPolytopeError:
        raise OutsideImageError("point is not in the image of the polytope") from None
    return F


def fiber_to_source(pi: Projection, point, y):
    """Map kernel coordinates of a fiber point back to source coordinates."""
    return from_lattice_coordinates(y, pi.section(point), pi.kernel)


# ---------------------------------------------------------------------------
# chamber complex

@dataclass(frozen=True)
class Wall:
    """``{q in aff(Q) : normal . q = offset}``; the normal is primitive, in dir(Q) and sign-normalized."""

    normal: tuple
    offset: Fraction

    def value(self, point):
        return dot(self.normal, point) - self.offset


@dataclass(frozen=True)
class Chamber:
    polytope: Polytope
    volume: Fraction
    barycenter: tuple
    centroid: tuple


@dataclass(frozen=True)
class ChamberComplex:
    base: Polytope
    chambers: tuple
    walls: tuple

    @property
    def total_volume(self) -> Fraction:
        return sum((c.volume for c in self.chambers), Fraction(0))


def _wall_from_points(points, eq_normals, d):
    base, dirs = affine_hull(points)
    ker = kernel_basis(list(dirs) + list(eq_normals), d)
    if len(ker) != 1:
        return None
    n = sign_normalize(ker[0])
    return Wall(n, dot(n, base))


def walls_of(P, pi: Projection, Q: Polytope, deadline=None) -> list[Wall]:
    """Affine hulls of face images of codimension one in ``aff(Q)``, deduplicated."""
    d = pi.target_dim
    target = Q.dim - 1
    if target < 0:
        return []
    eq_normals = [tuple(int(x) for x in c) for c, _ in Q.equations]
    images = [pi(v) for v in P.vertices]
    walls = set()
    seen = set()
    lattice = P.face_lattice
    for k in range(target, P.dim + 1):
        for mask in lattice[k]:
            pts = sorted({images[i] for i in range(len(images)) if mask >> i & 1})
            key = tuple(pts)
            if key in seen:
                continue
            seen.add(key)
            _, dirs = affine_hull(pts)
            if len(dirs) != target:
                continue
            w = _wall_from_points(pts, eq_normals, d)
            if w is not None:
                walls.add(w)
        if deadline is not None:
            deadline.check("wall enumeration")
    return sorted(walls, key=lambda w: (w.normal, w.offset))


def chamber_complex(P, pi: Projection, deadline=None) -> ChamberComplex:
    """Subdivide ``Q = pi(P)`` by every wall that cuts a cell's interior.

    Cells are split recursively with exact half-spaces and deduplicated by
    vertex set.  Each chamber carries its normalized volume (in the lattice of
    ``aff(Q)``), its vertex barycenter and its center of mass.
    """
    P = as_polytope(P)
    _check_dims(P, pi)
    Q = affine_image(P, pi.matrix, pi.offset)
    walls = walls_of(P, pi, Q, deadline)
    cells = [Polytope(h=Q.hrep)]
    used = []
    for w in walls:
        nxt = []
        cut = False
        for cell in cells:
            vals = [w.value(v) for v in cell.vertices]
            if min(vals) < 0 < max(vals):
                cut = True
                h = cell.h
                lo = HPolytope(h.ambient_dim, h.inequalities + ((w.normal, w.offset),), h.equations)
                hi = HPolytope(h.ambient_dim, h.inequalities + ((tuple(-x for x in w.normal), -w.offset),),
                               h.equations)
                nxt.append(Polytope(h=lo))
                nxt.append(Polytope(h=hi))
            else:
                nxt.append(cell)
        if cut:
            used.append(w)
        cells = nxt
        if deadline is not None:
            deadline.progress["cells"] = len(cells)
            deadline.check("chamber splitting")
    uniq = {}
    for cell in cells:
        uniq.setdefault(cell.vertices, cell)
    chambers = []
    for verts in sorted(uniq):
        cell = uniq[verts]
        chambers.append(Chamber(cell, normalized_volume(cell), barycenter(cell), centroid(cell)))
    return ChamberComplex(Q, tuple(chambers), tuple(used))


def random_interior_point(P, rng: random.Random):
    """Strictly positive random convex combination of the vertices (relative interior)."""
    P = as_polytope(P)
    weights = [Fraction(rng.randint(1, 16)) for _ in P.vertices]
    total = sum(weights)
    return tuple(sum(w * v[j] for w, v in zip(weights, P.vertices)) / total for j in range(P.ambient_dim))


def check_constancy(P, pi: Projection, cc: ChamberComplex, seed: int = 0) -> list[dict]:
    """Chambers whose fiber vertex count differs between the barycenter and a random interior point."""
    rng = random.Random(seed)
    bad = []
    for i, ch in enumerate(cc.chambers):
        other = random_interior_point(ch.polytope, rng)
        a = len(fiber_over(P, pi, ch.barycenter).vertices)
        b = len(fiber_over(P, pi, other).vertices)
        if a != b:
            bad.append({"chamber": i, "barycenter_vertices": a, "random_point_vertices": b})
    return bad


# ---------------------------------------------------------------------------
# fiber polytope

@dataclass(frozen=True)
class FiberPolytopeResult:
    sigma: Polytope
    fan_from_sigma: Fan
    fan_from_refinement: Fan
    agreement: bool
    chamber_complex: ChamberComplex
    source_polytope_dim: int
    image_dim: int

    @property
    def dim(self) -> int:
        return self.sigma.dim

    @property
    def dimension_formula_holds(self) -> bool:
        return self.sigma.dim == self.source_polytope_dim - self.image_dim

    def to_json(self) -> dict:
        cc = self.chamber_complex
        return {
            "sigma": polytope_to_json(self.sigma),
            "sigma_dim": self.sigma.dim,
            "sigma_scaling": "unnormalized: sum over chambers of volume(chamber) * fiber(center of mass)",
            "fan_from_sigma": fan_to_json(self.fan_from_sigma),
            "fan_from_refinement": fan_to_json(self.fan_from_refinement),
            "agreement": self.agreement,
            "chamber_count": len(cc.chambers),
            "walls": [{"normal": list(w.normal), "offset": format_rational(w.offset)} for w in cc.walls],
            "source_dim": self.source_polytope_dim,
            "image_dim": self.image_dim,
        }


def fiber_polytope(P, pi: Projection, deadline=None) -> FiberPolytopeResult:
    """Fiber polytope of ``pi: P -> pi(P)`` together with both descriptions of its normal fan.

    ``sigma`` is the Minkowski sum over chambers of ``volume * fiber(center of
    mass)``; ``fan_from_refinement`` is the common refinement of the normal
    fans of the fibers over the chamber barycenters.
    """
    P = as_polytope(P)
    cc = chamber_complex(P, pi, deadline)
    terms = []
    fans = []
    for i, ch in enumerate(cc.chambers):
        terms.append((ch.volume, fiber_over(P, pi, ch.centroid)))
        fans.append(ambient_normal_fan(fiber_over(P, pi, ch.barycenter)))
        if deadline is not None:
            deadline.progress["fibers"] = i + 1
            deadline.check("fiber evaluation")
    sigma = Polytope(v=minkowski_weighted(terms, deadline))
    s = len(pi.kernel)
    fan_sigma = ambient_normal_fan(sigma) if s else trivial_fan(0)
    fan_ref = refine_all(fans, deadline) if s else trivial_fan(0)
    return FiberPolytopeResult(sigma, fan_sigma, fan_ref, fan_equal(fan_sigma, fan_ref), cc, P.dim, cc.base.dim)


def refined_fiber_fan(P, pi: Projection, deadline=None) -> Fan:
    """Common refinement of the normal fans (in kernel coordinates) of the chamber fibers."""
    P = as_polytope(P)
    cc = chamber_complex(P, pi, deadline)
    if not pi.kernel:
        return trivial_fan(0)
    return refine_all([ambient_normal_fan(fiber_over(P, pi, ch.barycenter)) for ch in cc.chambers], deadline)


def quotient_polytope(P, pi: Projection, mu, k: int, lattice: AffineLattice | None = None):
    """Fiber of ``k P`` over ``k mu`` and the number of lattice points in it.

    The dilated map sends ``x`` to ``matrix . x + k * offset``.  Lattice points
    are counted in source coordinates with respect to ``lattice``.
    """
    P = as_polytope(P)
    _check_dims(P, pi)
    if k < 1:
        raise ValueError("k must be a positive integer")
    mu = qvec(mu)
    Pk = dilate(P, k)
    pik = Projection(pi.matrix, tuple(k * o for o in pi.offset))
    point = tuple(k * m for m in mu)
    fiber = fiber_over(Pk, pik, point)
    h = Pk.h
    extra = tuple((row, p - o) for row, p, o in zip(pik.matrix, point, pik.offset))
    hh = HPolytope(h.ambient_dim, h.inequalities, h.equations + extra)
    count = len(lattice_points(hh, lattice))
    return fiber, count
