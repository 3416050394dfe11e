import random
from fractions import Fraction

import pytest

from fiberfan.errors import DimensionMismatchError, OutsideImageError
from fiberfan.exact import matvec
from fiberfan.fan import Cone, Fan, fan_equal, is_complete, normal_fan, trivial_fan
from fiberfan.fiber import (
    Projection,
    chamber_complex,
    check_constancy,
    fiber_over,
    fiber_polytope,
    fiber_to_source,
    identity_projection,
    quotient_polytope,
    refined_fiber_fan,
)
from fiberfan.models import gt_polytope, hypersimplex, parity_lattice, phi
from fiberfan.polytope import Polytope, affine_image, dilate, normalized_volume

SQUARE = Polytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])
FIRST = Projection(((1, 0),))
LINE = Fan(1, (Cone.from_rays(1, [(1,)]), Cone.from_rays(1, [(-1,)])))


def random_instance(seed):
    rng = random.Random(seed)
    while True:
        d = rng.randint(2, 4)
        P = Polytope.from_points({tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(d + 3)}, d)
        if P.dim < 2:
            continue
        m = rng.randint(1, min(2, d - 1))
        M = tuple(tuple(rng.randint(-1, 1) for _ in range(d)) for _ in range(m))
        pi = Projection(M)
        if pi.rank == m:
            return P, pi


class TestProjection:
    def test_kernel(self):
        pi = phi(4)
        assert pi.kernel == ((0, 0, 0, 0, 1),)
        assert all(not any(matvec(pi.matrix, k)) for k in pi.kernel)
        assert len(pi.kernel) == pi.source_dim - pi.rank

    def test_json_round_trip(self):
        pi = Projection(((1, 2, 0), (0, 1, 1)), (Fraction(1, 2), -1))
        back = Projection.from_json(pi.to_json())
        assert back == pi

    def test_rejects_fractional_matrix(self):
        with pytest.raises(ValueError):
            Projection(((Fraction(1, 2), 1),))

    def test_section_inconsistent(self):
        assert Projection(((1, 1), (2, 2))).section((1, 1)) is None


class TestFiberOver:
    def test_unit_r_in_second_dilate(self):
        # r = (1,1,1,1) has sum 4, so its fiber lives in the second dilate
        F = fiber_over(dilate(gt_polytope(4), 2), phi(4), (1, 1, 1, 1))
        assert F.vertices == ((0,), (2,))

    def test_unit_r_half(self):
        F = fiber_over(gt_polytope(4), phi(4), (Fraction(1, 2),) * 4)
        assert F.vertices == ((0,), (1,))

    def test_vertex_fiber_point(self):
        F = fiber_over(gt_polytope(4), phi(4), (1, 1, 0, 0))
        assert F.vertices == ((0,),) and F.dim == 0

    def test_identity(self):
        F = fiber_over(SQUARE, identity_projection(2), (Fraction(1, 3), 1))
        assert F.dim == 0 and F.ambient_dim == 0

    def test_outside(self):
        with pytest.raises(OutsideImageError):
            fiber_over(gt_polytope(4), phi(4), (1, 1, 1, 1))
        with pytest.raises(OutsideImageError):
            fiber_over(SQUARE, identity_projection(2), (2, 0))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fiber_over(SQUARE, phi(4), (0, 0, 0, 0))

    def test_back_to_source(self):
        q = (Fraction(1, 2),) * 4
        F = fiber_over(gt_polytope(4), phi(4), q)
        pts = [fiber_to_source(phi(4), q, y) for y in F.vertices]
        assert pts == [q + (0,), q + (1,)]
        assert all(gt_polytope(4).contains(p) for p in pts)

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_vertex_images_have_point_fibers(self, n):
        G, pi = gt_polytope(n), phi(n)
        for v in hypersimplex(n).vertices:
            assert fiber_over(G, pi, v).dim == 0


class TestChamberComplex:
    def test_square(self):
        cc = chamber_complex(SQUARE, FIRST)
        assert [c.polytope.vertices for c in cc.chambers] == [((0,), (1,))]
        assert not cc.walls

    def test_triangle(self):
        T = Polytope.from_points([(0, 0), (2, 0), (1, 1)])
        cc = chamber_complex(T, FIRST)
        assert sorted(c.polytope.vertices for c in cc.chambers) == [((0,), (1,)), ((1,), (2,))]
        assert [(w.normal, w.offset) for w in cc.walls] == [((1,), 1)]
        assert cc.total_volume == 2

    def test_n4_walls(self):
        cc = chamber_complex(gt_polytope(4), phi(4))
        walls = {(tuple(w.normal), w.offset) for w in cc.walls}
        # r1 + r2 = r3 + r4, r1 - r2 = r3 - r4, r1 - r2 = r4 - r3 (sign-normalized)
        for target in [(1, 1, -1, -1), (1, -1, -1, 1), (1, -1, 1, -1)]:
            assert (target, 0) in walls
        assert cc.total_volume == normalized_volume(hypersimplex(4))
        assert not check_constancy(gt_polytope(4), phi(4), cc, seed=1)

    def test_breakpoint_oracle_n4(self):
        # fiber over r is [max(|r1-r2|, |r3-r4|), min(r1+r2, r3+r4)]
        G, pi = gt_polytope(4), phi(4)
        cc = chamber_complex(G, pi)
        for ch in cc.chambers:
            r = ch.barycenter
            lo = max(abs(r[0] - r[1]), abs(r[2] - r[3]))
            hi = min(r[0] + r[1], r[2] + r[3])
            F = fiber_over(G, pi, r)
            assert (min(F.vertices)[0], max(F.vertices)[0]) == (lo, hi)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_volume_sum_and_disjointness(self, seed):
        P, pi = random_instance(seed)
        cc = chamber_complex(P, pi)
        Q = affine_image(P, pi.matrix)
        assert cc.total_volume == normalized_volume(Q)
        assert not check_constancy(P, pi, cc, seed)
        # barycenters of distinct chambers are not inside any other chamber
        for i, a in enumerate(cc.chambers):
            for j, b in enumerate(cc.chambers):
                if i != j:
                    assert not b.polytope.contains(a.barycenter)


class TestFiberPolytope:
    def test_square(self):
        res = fiber_polytope(SQUARE, FIRST)
        assert res.sigma.dim == 1 and len(res.chamber_complex.chambers) == 1
        assert res.sigma.vertices == ((0,), (1,))
        assert fan_equal(res.fan_from_sigma, LINE) and res.agreement

    def test_identity(self):
        res = fiber_polytope(SQUARE, identity_projection(2))
        assert res.dim == 0 and fan_equal(res.fan_from_sigma, trivial_fan(0)) and res.agreement

    def test_single_chamber_refined_fan_is_fiber_fan(self):
        cube = Polytope.from_points([(a, b, c) for a in (0, 1) for b in (0, 2) for c in (0, 1)])
        pi = Projection(((1, 0, 0),))
        F = refined_fiber_fan(cube, pi)
        assert fan_equal(F, normal_fan(fiber_over(cube, pi, (Fraction(1, 2),))))

    def test_n4(self):
        res = fiber_polytope(gt_polytope(4), phi(4))
        assert res.dim == 1 and res.dimension_formula_holds
        assert fan_equal(res.fan_from_sigma, LINE) and res.agreement
        assert fan_equal(refined_fiber_fan(gt_polytope(4), phi(4)), LINE)

    def test_json(self):
        obj = fiber_polytope(SQUARE, FIRST).to_json()
        assert obj["agreement"] is True and obj["chamber_count"] == 1
        assert set(obj) >= {"sigma", "fan_from_sigma", "fan_from_refinement", "walls"}

    @pytest.mark.parametrize("seed", range(5))
    def test_random_instances(self, seed):
        P, pi = random_instance(seed)
        res = fiber_polytope(P, pi)
        assert res.dimension_formula_holds
        assert res.agreement
        assert fan_equal(res.fan_from_refinement, refined_fiber_fan(P, pi))
        if res.dim == len(pi.kernel):
            assert is_complete(res.fan_from_sigma)


class TestQuotient:
    def test_k2(self):
        F, count = quotient_polytope(gt_polytope(4), phi(4), (Fraction(1, 2),) * 4, 2, parity_lattice(4))
        assert F.vertices == ((0,), (2,)) and count == 2

    def test_k4(self):
        _, count = quotient_polytope(gt_polytope(4), phi(4), (Fraction(1, 2),) * 4, 4, parity_lattice(4))
        assert count == 3

    def test_vertex_k1(self):
        G = gt_polytope(5)
        for v in hypersimplex(5).vertices:
            F, count = quotient_polytope(G, phi(5), v, 1, parity_lattice(5))
            assert F.dim == 0 and count in (0, 1)

    def test_outside(self):
        with pytest.raises(OutsideImageError):
            quotient_polytope(gt_polytope(4), phi(4), (1, 1, 1, 1), 1)
