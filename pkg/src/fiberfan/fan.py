"""Rational polyhedral cones and fans.

Cones are kept in a canonical form: a Hermite-normal-form basis of the
lineality space, primitive rays projected onto its orthogonal complement, and
primitive facet normals lying in the linear span of the cone.  Two cones are
equal iff their canonical forms are equal as sorted integer lists.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .dd import cone_generators
from .errors import DimensionMismatchError
from .exact import dot, rank
from .polytope import Polytope, as_polytope


@dataclass(frozen=True, eq=False)
class Cone:
    """``lineality + cone(rays)``, with H-description ``n.x >= 0`` (normals) and ``c.x = 0`` (equations)."""

    ambient_dim: int
    rays: tuple
    lineality: tuple
    facet_normals: tuple
    equations: tuple

    @classmethod
    def from_rays(cls, ambient_dim: int, rays: Iterable[Sequence], lineality: Iterable[Sequence] = ()) -> "Cone":
        rays = [tuple(r) for r in rays]
        lineality = [tuple(v) for v in lineality]
        for v in rays + lineality:
            if len(v) != ambient_dim:
                raise DimensionMismatchError("generator of wrong length")
        # dual cone {n : n.r >= 0, n.l = 0}; its rays are the facet normals
        normals, eqs = cone_generators(rays, lineality, ambient_dim)
        return cls._from_h(ambient_dim, normals, eqs)

    @classmethod
    def from_inequalities(cls, ambient_dim: int, normals: Iterable[Sequence],
                          equations: Iterable[Sequence] = ()) -> "Cone":
        return cls._from_h(ambient_dim, [tuple(n) for n in normals], [tuple(c) for c in equations])

    @classmethod
    def _from_h(cls, d, normals, eqs):
        rays, lin = cone_generators(normals, eqs, d)
        # re-derive the irredundant H-description from the generators
        fnormals, feqs = cone_generators(rays, lin, d)
        return cls(d, tuple(rays), tuple(lin), tuple(fnormals), tuple(feqs))

    @classmethod
    def whole_space(cls, d: int) -> "Cone":
        return cls.from_rays(d, [], [tuple(int(i == j) for j in range(d)) for i in range(d)])

    @property
    def key(self):
        return (self.lineality, self.rays)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.ambient_dim == other.ambient_dim and self.key == other.key

    def __hash__(self):
        return hash((self.ambient_dim, self.key))

    def __repr__(self):
        return f"Cone(dim={self.dim}, rays={list(self.rays)}, lineality={list(self.lineality)})"

    @cached_property
    def dim(self) -> int:
        return len(self.lineality) + rank(self.rays) if self.rays else len(self.lineality)

    def contains(self, x) -> bool:
        return all(dot(n, x) >= 0 for n in self.facet_normals) and all(dot(c, x) == 0 for c in self.equations)

    def intersect(self, other: "Cone") -> "Cone":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("cones live in different spaces")
        return Cone._from_h(self.ambient_dim, list(self.facet_normals + other.facet_normals),
                            list(self.equations + other.equations))

    def facet_ray_sets(self) -> list[frozenset]:
        return [frozenset(r for r in self.rays if dot(n, r) == 0) for n in self.facet_normals]

    def faces(self) -> list[frozenset]:
        """Ray sets of all faces, from the whole cone down to the minimal face (empty ray set)."""
        fsets = self.facet_ray_sets()
        top = frozenset(self.rays)
        seen = {top}
        stack = [top]
        while stack:
            s = stack.pop()
            cands = {s & f for f in fsets} - {s}
            for c in cands:
                if not any(c < o for o in cands) and c not in seen:
                    seen.add(c)
                    stack.append(c)
        return sorted(seen, key=lambda s: (len(s), sorted(s)))

    def validate(self) -> bool:
        """Dual-description consistency: rays satisfy all normals and each normal cuts a facet."""
        if not all(self.contains(r) for r in self.rays):
            return False
        for l in self.lineality:
            if not (self.contains(l) and self.contains(tuple(-x for x in l))):
                return False
        k = self.dim - len(self.lineality)
        for n in self.facet_normals:
            tight = [r for r in self.rays if dot(n, r) == 0]
            if (rank(tight) if tight else 0) != k - 1:
                return False
        return True


def _face_dim(rays, lineality):
    return len(lineality) + (rank(list(rays)) if rays else 0)


@dataclass(frozen=True, eq=False)
class Fan:
    ambient_dim: int
    maximal_cones: tuple

    def __post_init__(self):
        uniq = {c.key: c for c in self.maximal_cones}
        for c in uniq.values():
            if c.ambient_dim != self.ambient_dim:
                raise DimensionMismatchError("cone and fan dimensions differ")
        object.__setattr__(self, "maximal_cones", tuple(uniq[k] for k in sorted(uniq)))

    @property
    def rays(self):
        return sorted({r for c in self.maximal_cones for r in c.rays})

    @property
    def lineality(self):
        lins = {c.lineality for c in self.maximal_cones}
        return lins.pop() if len(lins) == 1 else None

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.maximal_cones), default=-1)

    def __eq__(self, other):
        return fan_equal(self, other)

    def __hash__(self):
        return hash((self.ambient_dim, tuple(c.key for c in self.maximal_cones)))

    def __repr__(self):
        return f"Fan(ambient_dim={self.ambient_dim}, n_rays={len(self.rays)}, n_cones={len(self.maximal_cones)})"

    def validate(self) -> bool:
        """Pairwise intersections of maximal cones are faces of both (desk-scale check)."""
        cones = self.maximal_cones
        for c in cones:
            if not c.validate():
                return False
        face_keys = [{(c.lineality, s) for s in c.faces()} for c in cones]
        for i in range(len(cones)):
            for j in range(i + 1, len(cones)):
                x = cones[i].intersect(cones[j])
                k = (x.lineality, frozenset(x.rays))
                if x.lineality != cones[i].lineality or x.lineality != cones[j].lineality:
                    return False
                if k not in face_keys[i] or k not in face_keys[j]:
                    return False
        return True


def trivial_fan(d: int) -> Fan:
    """The fan whose only cone is the whole space (normal fan of a point)."""
    return Fan(d, (Cone.whole_space(d),))


def _vertex_cones(P: Polytope, lineality):
    d = P.ambient_dim
    if P.dim == 0:
        return [Cone.whole_space(d)]
    normals = [tuple(int(x) for x in a) for a, _ in P.facets]
    cones = []
    for i in range(len(P.vertices)):
        at_v = [normals[j] for j, m in enumerate(P.incidence) if m >> i & 1]
        cones.append(Cone.from_rays(d, at_v, lineality))
    return cones


def ambient_normal_fan(P) -> Fan:
    """Normal fan of ``P`` in its own ambient space.

    For a lower-dimensional ``P`` every cone contains the annihilator of the
    direction space of ``aff(P)`` as lineality.
    """
    P = as_polytope(P)
    lineality = [tuple(int(x) for x in c) for c, _ in P.equations]
    return Fan(P.ambient_dim, tuple(_vertex_cones(P, lineality)))


def normal_fan(P) -> Fan:
    """Complete pointed fan in the dual of the direction space of ``aff(P)``.

    Coordinates on that space come from the integer lattice basis of the
    direction space, so the fan has dimension ``dim P``.  Maximal cones are
    the vertex normal cones, spanned by the outer facet normals at the vertex.
    """
    P = as_polytope(P)
    if P.dim == P.ambient_dim:
        return ambient_normal_fan(P)
    ys = [P.lattice_coords(v) for v in P.vertices]
    if P.dim == 0:
        return trivial_fan(0)
    return ambient_normal_fan(Polytope.from_points(ys, P.dim))


def refine(F: Fan, G: Fan, deadline=None) -> Fan:
    """Common refinement: maximal-dimensional pairwise intersections of maximal cones.

    A maximal cone of one fan that meets no cone of the other in its own
    dimension is carried over unchanged, so fans with disjoint supports
    refine to their union.  For complete fans this never triggers.
    """
    if F.ambient_dim != G.ambient_dim:
        raise DimensionMismatchError("fans live in different spaces")
    if fan_equal(F, G):
        return F
    found = []
    covered_g = set()
    for a in F.maximal_cones:
        hit = False
        for j, b in enumerate(G.maximal_cones):
            x = a.intersect(b)
            found.append(x)
            if x.dim == a.dim:
                hit = True
            if x.dim == b.dim:
                covered_g.add(j)
        if not hit:
            found.append(a)
        if deadline is not None:
            deadline.check("fan refinement")
    found.extend(b for j, b in enumerate(G.maximal_cones) if j not in covered_g)
    top = max(c.dim for c in found)
    return Fan(F.ambient_dim, tuple(c for c in found if c.dim == top))


def refine_all(fans: Sequence[Fan], deadline=None) -> Fan:
    uniq = {}
    for f in fans:
        uniq.setdefault(tuple(c.key for c in f.maximal_cones), f)
    fans = [uniq[k] for k in sorted(uniq)]
    acc = fans[0]
    for f in fans[1:]:
        acc = refine(acc, f, deadline)
    return acc


def fan_equal(F: Fan, G: Fan) -> bool:
    return F.ambient_dim == G.ambient_dim and \
        [c.key for c in F.maximal_cones] == [c.key for c in G.maximal_cones]


def is_complete(F: Fan) -> bool:
    """Every facet of every maximal cone is shared by exactly one other maximal cone.

    A single cone with no facets is complete iff it is the whole space.
    """
    d = F.ambient_dim
    cones = F.maximal_cones
    if not cones or any(c.dim != d for c in cones):
        return False
    if len(cones) == 1 and not cones[0].facet_normals:
        return True
    counts = {}
    for c in cones:
        if not c.facet_normals:
            return False
        for s in c.facet_ray_sets():
            counts[(c.lineality, s)] = counts.get((c.lineality, s), 0) + 1
    return all(v == 2 for v in counts.values())


def f_vector(F: Fan) -> tuple[int, ...]:
    """Number of distinct cones per dimension, counted modulo the lineality space.

    Entry 0 is the minimal cone (the origin for a pointed fan).
    """
    faces = set()
    for c in F.maximal_cones:
        for s in c.faces():
            faces.add((c.lineality, s))
    top = max((_face_dim(s, lin) - len(lin) for lin, s in faces), default=-1)
    counts = [0] * (top + 1)
    for lin, s in faces:
        counts[_face_dim(s, lin) - len(lin)] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# JSON

def fan_to_json(F: Fan) -> dict:
    rays = F.rays
    index = {r: i for i, r in enumerate(rays)}
    out = {
        "ambient_dim": F.ambient_dim,
        "rays": [list(r) for r in rays],
        "maximal_cones": [sorted(index[r] for r in c.rays) for c in F.maximal_cones],
    }
    lin = F.lineality
    if lin:
        out["lineality"] = [list(v) for v in lin]
    return out


def fan_from_json(obj: dict) -> Fan:
    d = int(obj["ambient_dim"])
    rays = [tuple(int(x) for x in r) for r in obj["rays"]]
    lin = [tuple(int(x) for x in v) for v in obj.get("lineality", [])]
    cones = tuple(Cone.from_rays(d, [rays[i] for i in idx], lin) for idx in obj["maximal_cones"])
    return Fan(d, cones)
