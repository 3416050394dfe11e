import itertools
import math
import random

import pytest

from fiberfan.errors import DimensionMismatchError
from fiberfan.exact import dot
from fiberfan.fan import (
    Cone,
    Fan,
    ambient_normal_fan,
    f_vector,
    fan_equal,
    fan_from_json,
    fan_to_json,
    is_complete,
    normal_fan,
    refine,
    trivial_fan,
)
from fiberfan.models import gt_polytope, hypersimplex
from fiberfan.polytope import Polytope, faces


def fan2(*ray_pairs):
    return Fan(2, tuple(Cone.from_rays(2, pair) for pair in ray_pairs))


QUADRANTS = fan2(((1, 0), (0, 1)), ((0, 1), (-1, 0)), ((-1, 0), (0, -1)), ((0, -1), (1, 0)))
# split along both diagonals y = x and y = -x
DIAGONALS = fan2(((1, 1), (1, -1)), ((1, 1), (-1, 1)), ((-1, 1), (-1, -1)), ((-1, -1), (1, -1)))
LINE = Fan(1, (Cone.from_rays(1, [(1,)]), Cone.from_rays(1, [(-1,)])))


def random_polytope(rng, d, npts=7):
    return Polytope.from_points({tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(npts)}, d)


class TestCone:
    def test_quadrant_dual_description(self):
        c = Cone.from_rays(2, [(2, 0), (0, 3)])
        assert c.rays == ((0, 1), (1, 0))
        assert set(c.facet_normals) == {(1, 0), (0, 1)}
        assert c.validate()

    def test_from_inequalities_round_trip(self):
        c = Cone.from_inequalities(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)])
        d = Cone.from_rays(3, c.rays)
        assert d == c and set(d.facet_normals) == set(c.facet_normals)

    def test_lineality_canonical(self):
        a = Cone.from_rays(2, [(1, 5)], [(0, 1)])
        b = Cone.from_rays(2, [(1, 0)], [(0, -1)])
        assert a == b and a.dim == 2 and a.rays == ((1, 0),)

    def test_whole_space(self):
        c = Cone.whole_space(3)
        assert c.dim == 3 and not c.facet_normals

    def test_intersection(self):
        c = Cone.from_rays(2, [(1, 0), (0, 1)]).intersect(Cone.from_rays(2, [(1, 1), (1, -1)]))
        assert c.rays == ((1, 0), (1, 1))

    def test_faces(self):
        c = Cone.from_rays(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert sorted(len(s) for s in c.faces()) == [0, 1, 1, 1, 2, 2, 2, 3]

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatchError):
            Cone.from_rays(2, [(1, 0, 0)])


class TestNormalFan:
    def test_segment(self):
        F = normal_fan(Polytope.from_points([(0,), (1,)]))
        assert list(F.rays) == [(-1,), (1,)] and len(F.maximal_cones) == 2

    def test_square(self):
        F = normal_fan(Polytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)]))
        assert fan_equal(F, QUADRANTS)

    def test_octahedron(self):
        D = hypersimplex(4)
        F = normal_fan(D)
        assert F.ambient_dim == 3 and F.dim == 3
        assert len(F.maximal_cones) == len(D.vertices) == 6
        assert len(F.rays) == len(faces(D, 2)) == 8
        assert f_vector(F) == (1, 8, 12, 6)
        assert is_complete(F) and F.validate()

    def test_point(self):
        F = normal_fan(Polytope.from_points([(1, 2, 3)]))
        assert F.ambient_dim == 0 and is_complete(F)
        assert fan_equal(F, trivial_fan(0))

    def test_ambient_fan_carries_lineality(self):
        F = ambient_normal_fan(hypersimplex(4))
        assert F.lineality == ((1, 1, 1, 1),)
        assert f_vector(F) == (1, 8, 12, 6)

    def test_lower_dim_segment(self):
        # segment from (0,0) to (2,2): intrinsic fan is the complete fan on +-1
        F = normal_fan(Polytope.from_points([(0, 0), (2, 2)]))
        assert fan_equal(F, LINE)

    @pytest.mark.parametrize("seed", range(12))
    def test_random_complete(self, seed):
        rng = random.Random(seed)
        P = random_polytope(rng, rng.randint(1, 3))
        F = normal_fan(P)
        assert is_complete(F)
        assert F.validate()
        assert all(c.validate() for c in F.maximal_cones)
        if P.dim == P.ambient_dim:
            # vertex v maximizes every functional in its cone
            for i, c in enumerate(F.maximal_cones):
                w = tuple(sum(x) for x in zip(*c.rays)) if c.rays else ()
                best = max(dot(w, v) for v in P.vertices)
                assert sum(dot(w, v) == best for v in P.vertices) == 1

    def test_gt4_complete(self):
        assert is_complete(normal_fan(gt_polytope(4)))


class TestRefine:
    def test_idempotent(self):
        assert fan_equal(refine(QUADRANTS, QUADRANTS), QUADRANTS)

    def test_half_lines(self):
        F = Fan(1, (Cone.from_rays(1, [(1,)]),))
        G = Fan(1, (Cone.from_rays(1, [(-1,)]),))
        R = refine(F, G)
        assert fan_equal(R, LINE) and is_complete(R)

    def test_quadrants_and_diagonals(self):
        R = refine(QUADRANTS, DIAGONALS)
        assert len(R.maximal_cones) == 8
        # hand oracle: consecutive pairs of the 8 rays around the circle
        circle = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
        expected = fan2(*[(circle[i], circle[(i + 1) % 8]) for i in range(8)])
        assert fan_equal(R, expected)
        assert is_complete(R) and f_vector(R) == (1, 8, 8)

    def test_commutative(self):
        assert fan_equal(refine(QUADRANTS, DIAGONALS), refine(DIAGONALS, QUADRANTS))

    @pytest.mark.parametrize("seed", range(8))
    def test_random_normal_fans(self, seed):
        rng = random.Random(seed)
        d = rng.randint(1, 3)
        P, Q, S = (random_polytope(rng, d, 6) for _ in range(3))
        if not (P.dim == Q.dim == S.dim == d):
            return
        F, G, H = normal_fan(P), normal_fan(Q), normal_fan(S)
        FG = refine(F, G)
        assert fan_equal(FG, refine(G, F))
        assert fan_equal(refine(FG, FG), FG)
        assert fan_equal(refine(FG, H), refine(F, refine(G, H)))
        assert is_complete(FG) and FG.validate()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            refine(QUADRANTS, LINE)


class TestCompletenessAndCounts:
    def test_fan_equal(self):
        assert fan_equal(QUADRANTS, QUADRANTS)
        assert fan_equal(QUADRANTS, refine(QUADRANTS, QUADRANTS))
        assert not fan_equal(QUADRANTS, DIAGONALS)

    def test_single_quadrant_incomplete(self):
        assert not is_complete(fan2(((1, 0), (0, 1))))

    def test_line(self):
        assert is_complete(LINE)
        assert f_vector(LINE) == (1, 2)

    def test_quadrant_f_vector(self):
        assert f_vector(QUADRANTS) == (1, 4, 4)

    def test_two_dimensional_rays_equal_cones(self):
        for k in range(3, 9):
            pts = [(round(100 * math.cos(2 * math.pi * i / k)), round(100 * math.sin(2 * math.pi * i / k)))
                   for i in range(k)]
            F = normal_fan(Polytope.from_points(pts))
            fv = f_vector(F)
            assert fv[1] == fv[2] == len(Polytope.from_points(pts).vertices)

    def test_validate_detects_overlap(self):
        bad = fan2(((1, 0), (0, 1)), ((1, 1), (-1, 0)))
        assert not bad.validate()


def test_json_round_trip():
    F = normal_fan(hypersimplex(4))
    obj = fan_to_json(F)
    assert obj["rays"] == sorted(obj["rays"])
    assert all(idx == sorted(idx) for idx in obj["maximal_cones"])
    assert fan_equal(fan_from_json(obj), F)
    A = ambient_normal_fan(hypersimplex(4))
    assert fan_equal(fan_from_json(fan_to_json(A)), A)


def test_cube_normal_fan_is_orthant_fan():
    P = Polytope.from_points(list(itertools.product((0, 1), repeat=3)))
    F = normal_fan(P)
    assert len(F.maximal_cones) == 8 and f_vector(F) == (1, 6, 12, 8)
