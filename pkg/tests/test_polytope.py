import itertools
import random
from fractions import Fraction

import pytest

from multitile.errors import DimensionUnsupported, InputError
from multitile.linalg import as_vec, vdot
from multitile.polytope import (
    HalfOpenPolytope,
    Polytope,
    ProbeDirection,
    contains_closed,
    contains_half_open,
    find_probe_direction,
    from_vertices,
)
from multitile.scalar import scalar_sqrt, to_scalar

from conftest import random_fraction

H = Fraction(1, 2)


class TestFromVertices:
    def test_rectangle_has_four_facets(self):
        p = from_vertices([(0, 0), (1, 0), (1, H), (0, H)])
        assert p.dim == 2 and len(p.facets) == 4
        for x, expect in (((H, Fraction(1, 4)), True), ((2, 0), False)):
            assert p.contains_closed(x) is expect

    def test_segment(self):
        p = from_vertices([(0,), (1,)])
        assert len(p.facets) == 2
        normals = sorted(n[0].rat for n, _ in p.facets)
        assert normals == [-1, 1]

    def test_interior_points_dropped(self):
        p = from_vertices([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)])
        assert len(p.vertices) == 4
        assert (to_scalar(1), to_scalar(1)) not in p.vertices

    def test_box_3d(self):
        pts = list(itertools.product((0, 1), repeat=3))
        p = from_vertices(pts)
        assert p.dim == 3 and len(p.facets) == 6

    def test_general_3d_rejected(self):
        simplex = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        with pytest.raises(DimensionUnsupported):
            from_vertices(simplex)

    def test_degenerate_rejected(self):
        with pytest.raises(InputError):
            from_vertices([(0, 0), (1, 1), (2, 2)])
        with pytest.raises(InputError):
            from_vertices([(0,), (0,)])


class TestHRep:
    def test_vertices_recovered_2d(self):
        p = Polytope([
            ((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0),
        ])
        assert set(p.vertices) == {
            (to_scalar(a), to_scalar(b)) for a in (0, 1) for b in (0, 1)
        }

    def test_unbounded_rejected(self):
        with pytest.raises(InputError):
            Polytope([((1, 0), 1), ((0, 1), 1)])

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            Polytope([((1,), 0), ((-1,), -1)])

    def test_lower_dimensional_rejected(self):
        with pytest.raises(InputError):
            Polytope([((1, 0), 0), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)])

    def test_duplicate_facets_removed(self):
        p = Polytope([
            ((1, 0), 1), ((2, 0), 2), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0),
        ])
        assert len(p.facets) == 4

    def test_bounding_box(self):
        p = Polytope([((1, 1), 1), ((-1, 0), 0), ((0, -1), 0)])
        lo, hi = p.bounding_box()
        assert lo == as_vec((0, 0)) and hi == as_vec((1, 1))


class TestProbe:
    def test_unit_square_probe(self, unit_square):
        assert find_probe_direction(unit_square).h == (1, 1)

    def test_segment_probe(self):
        assert find_probe_direction(from_vertices([(0,), (1,)])).h == (1,)

    def test_box_3d_probe(self):
        p = from_vertices(list(itertools.product((0, 1), repeat=3)))
        assert find_probe_direction(p).h == (1, 1, 1)

    def test_probe_matches_candidate_scan_oracle(self, unit_square):
        # Independent re-derivation of the documented candidate order.
        def candidates(d):
            k = 1
            while True:
                rng = list(range(k, -k - 1, -1))
                for cand in itertools.product(rng, repeat=d):
                    if max(abs(x) for x in cand) == k:
                        yield cand
                k += 1

        def first_valid(p):
            for cand in candidates(p.dim):
                hv = as_vec(cand)
                if all(vdot(n, hv).sign() != 0 for n, _ in p.facets):
                    return cand

        tri = from_vertices([(0, 0), (1, 0), (0, 1)])
        for p in (unit_square, tri):
            assert find_probe_direction(p).h == first_valid(p)

    def test_diagonal_facet_rejects_parallel_probe(self):
        tri = from_vertices([(0, 0), (1, 0), (0, 1)])
        with pytest.raises(InputError):
            ProbeDirection((1, -1), tri)  # runs along the hypotenuse

    def test_probe_validation(self, unit_square):
        ProbeDirection((1, 1), unit_square)
        with pytest.raises(InputError):
            ProbeDirection((1, 0), unit_square)
        with pytest.raises(InputError):
            ProbeDirection((0, 0))


class TestHalfOpen:
    def test_unit_square_corner_rules(self, unit_square):
        hop = HalfOpenPolytope(unit_square, ProbeDirection((1, 1)))
        assert contains_half_open(hop, (0, 0))
        assert not contains_half_open(hop, (1, 0))
        assert not contains_half_open(hop, (0, 1))
        assert not contains_half_open(hop, (1, 1))
        assert contains_half_open(hop, (H, H))

    def test_closed_membership(self, unit_square):
        assert contains_closed(unit_square, (1, 1))
        assert contains_closed(unit_square, (H, H))
        assert not contains_closed(unit_square, (Fraction(3, 2), 0))

    def test_probe_flip_gives_complementary_square(self, unit_square):
        plus = HalfOpenPolytope(unit_square, ProbeDirection((1, 1)))
        minus = HalfOpenPolytope(unit_square, ProbeDirection((-1, -1)))
        assert contains_half_open(minus, (1, 1))
        assert not contains_half_open(minus, (0, 0))
        assert contains_half_open(minus, (1, H))
        assert not contains_half_open(plus, (1, H))

    def test_boundary_partition_property(self, unit_square):
        # Every closure point is either half-open-in, or excluded with some
        # active facet pointing along the probe.
        hop = HalfOpenPolytope(unit_square, ProbeDirection((1, 1)))
        hv = as_vec((1, 1))
        rng = random.Random(5)
        checked = 0
        for _ in range(1000):
            if rng.random() < 0.5:
                v = (random_fraction(rng, 0, 1), random_fraction(rng, 0, 1))
            else:
                edge = rng.randrange(4)
                t = random_fraction(rng, 0, 1)
                v = [(t, 0), (t, 1), (Fraction(0), t), (Fraction(1), t)][edge]
            if not unit_square.contains_closed(v):
                continue
            checked += 1
            inside = contains_half_open(hop, v)
            active = unit_square.active_facets(v)
            if inside:
                for i in active:
                    assert vdot(unit_square.facets[i][0], hv).sign() < 0
            else:
                assert any(
                    vdot(unit_square.facets[i][0], hv).sign() > 0 for i in active
                )
        assert checked >= 900

    def test_interior_always_in(self, unit_square):
        hop = HalfOpenPolytope(unit_square, ProbeDirection((1, 1)))
        rng = random.Random(6)
        for _ in range(200):
            v = (Fraction(rng.randint(1, 99), 100), Fraction(rng.randint(1, 99), 100))
            assert contains_half_open(hop, v)


def test_irrational_polytope():
    r2 = scalar_sqrt(2)
    p = from_vertices([(0, 0), (r2, 0), (r2, 1), (0, 1)])
    assert p.contains_closed((1, H))
    assert not p.contains_closed((Fraction(3, 2), H))
    assert find_probe_direction(p).h == (1, 1)
