from fractions import Fraction

import pytest

from multitile.arrangement import InputSegment, TorusArrangement, supporting_lines
from multitile.errors import ModeUnavailable
from multitile.lattice import Coset, Lattice, QuasiPeriodicSet
from multitile.linalg import as_vec
from multitile.polytope import from_vertices
from multitile.scalar import scalar_sqrt, to_scalar
from multitile.verifier import translate_segments

H = Fraction(1, 2)


def square_segments(z2, unit_square):
    q = QuasiPeriodicSet((Coset(z2, (0, 0)),))
    return translate_segments(unit_square, q, z2)


class TestConstruction:
    def test_unit_square_on_torus(self, z2, unit_square):
        arr = TorusArrangement(z2, square_segments(z2, unit_square))
        verts, mids, cells = arr.face_points()
        assert arr.cell_count == 1
        assert len(verts) == 4  # the four corners, one orbit on the torus
        assert all(unit_square.contains_closed(p) for p in verts + mids + cells)

    def test_example51_structure(self, z2, rect51, q51):
        arr = TorusArrangement(z2, translate_segments(rect51, q51, z2))
        # slabs split at x = 0, sqrt2/2, 1; stacks carry y = 0, 1/2, 1
        assert len(arr.xs) == 3
        assert arr.cell_count == 4

    def test_segments_clipped_to_domain(self, z2, rect51, q51):
        arr = TorusArrangement(z2, translate_segments(rect51, q51, z2))
        one = to_scalar(1)
        zero = to_scalar(0)
        for s in arr.segments:
            for p in (s.p, s.q):
                assert zero <= p[0] <= one and zero <= p[1] <= one

    def test_requires_2d(self):
        with pytest.raises(ModeUnavailable):
            TorusArrangement(Lattice.standard(3), [])

    def test_parallelogram_domain(self):
        lat = Lattice([[2, 1], [-1, 1]])
        tri = from_vertices([(0, 0), (1, 0), (0, 1)])
        q = QuasiPeriodicSet((Coset(lat, (0, 0)),))
        arr = TorusArrangement(lat, translate_segments(tri, q, lat))
        verts, mids, cells = arr.face_points()
        assert cells and mids and verts
        connected, _ = arr.connectivity(lambda groups: False)
        assert connected


class TestConnectivity:
    def test_nothing_blocked_is_connected(self, z2, unit_square):
        arr = TorusArrangement(z2, square_segments(z2, unit_square))
        connected, witness = arr.connectivity(lambda groups: False)
        assert connected and witness == []

    def test_horizontal_bands_disconnect(self, z2, rect51, q51):
        arr = TorusArrangement(z2, translate_segments(rect51, q51, z2))
        connected, witness = arr.connectivity(
            lambda groups: 0 in groups and 1 in groups)
        assert not connected
        lines = supporting_lines(witness)
        # all witness lines horizontal: 0*x + 1*y = c
        assert all(a == to_scalar(0) and b == to_scalar(1) for a, b, _ in lines)
        cs = {c for _, _, c in lines}
        assert to_scalar(0) in cs or to_scalar(1) in cs
        assert to_scalar(H) in cs

    def test_vertical_circle_plane_disconnects_despite_torus_connectivity(
            self, z2, unit_square):
        # Overlap set = the vertical lines x in Z: removing it leaves the
        # torus connected (wrap through y) but the plane disconnected.
        q = QuasiPeriodicSet((Coset(z2, (0, 0)), Coset(z2, (0, H))))
        arr = TorusArrangement(z2, translate_segments(unit_square, q, z2))
        connected, witness = arr.connectivity(
            lambda groups: 0 in groups and 1 in groups)
        assert not connected
        lines = supporting_lines(witness)
        assert all(a == to_scalar(1) and b == to_scalar(0) for a, b, _ in lines)

    def test_point_contacts_do_not_block(self, z2, unit_square):
        q = QuasiPeriodicSet((Coset(z2, (0, 0)), Coset(z2, (H, H))))
        arr = TorusArrangement(z2, translate_segments(unit_square, q, z2))
        connected, _ = arr.connectivity(lambda groups: 0 in groups and 1 in groups)
        assert connected

    def test_full_blocking_of_all_segments(self, z2, unit_square):
        arr = TorusArrangement(z2, square_segments(z2, unit_square))
        connected, witness = arr.connectivity(lambda groups: True)
        assert not connected
        assert witness


class TestFaceCoverage:
    def test_face_points_cover_grid(self, z2):
        # 2x2 grid of half-size squares within the torus: 4 cells expected.
        small = from_vertices([(0, 0), (H, 0), (H, H), (0, H)])
        lat = Lattice([[H, 0], [0, H]])
        q = QuasiPeriodicSet((Coset(lat, (0, 0)),))
        arr = TorusArrangement(z2, translate_segments(small, q, z2))
        assert arr.cell_count == 4

    def test_irrational_vertical_segment(self, z2):
        r2 = scalar_sqrt(2)
        seg = InputSegment((r2 / 2, to_scalar(0)), (r2 / 2, to_scalar(1)), {0})
        arr = TorusArrangement(z2, [seg])
        verts, mids, cells = arr.face_points()
        assert arr.cell_count == 2
        assert any((p[0] - r2 / 2).sign() == 0 for p in mids)
