"""Exact arrangement of segments on a 2D torus via trapezoidal slabs.

The torus is R^2 modulo a period lattice; the working window is the closed
fundamental parallelogram spanned by the basis.  Vertical lines through every
vertex x-coordinate cut the window into slabs; inside a slab the active
segments are disjoint and vertically ordered, so the refined faces are
trapezoids with exact interior representatives.  This refinement covers every
face of the plain segment arrangement: each original cell contains a
trapezoid, each original 1-cell contains a piece midpoint, and the original
0-cells are exactly the collected vertices.

Face adjacency carries the set of source groups whose input segments contain
the shared 1-cell, so connectivity questions of the form "is the complement
of certain overlap sets path-connected" reduce to graph reachability.  Plane
(as opposed to torus) connectivity additionally requires the boundary-gluing
cycles of a component to generate all of Z^2; that subgroup is tracked with
integer voltages on the glue edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, ModeUnavailable
from .lattice import Lattice
from .linalg import Vec, as_vec, hnf_subgroup_index, mat_vec, vdot
from .scalar import Scalar, to_scalar


@dataclass(frozen=True)
class InputSegment:
    p: Vec
    q: Vec
    groups: frozenset

    def __post_init__(self):
        object.__setattr__(self, "p", as_vec(self.p))
        object.__setattr__(self, "q", as_vec(self.q))
        object.__setattr__(self, "groups", frozenset(self.groups))


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _seg_y_at(p, q, x):
    return p[1] + (x - p[0]) * (q[1] - p[1]) / (q[0] - p[0])


class _Level:
    __slots__ = ("y", "groups", "rep", "segments")

    def __init__(self, y, groups, rep):
        self.y = y
        self.groups = groups
        self.rep = rep  # (p, q) on the supporting line

    def y_at(self, x):
        p, q = self.rep
        if (q[0] - p[0]).sign() == 0:
            return self.y
        return _seg_y_at(p, q, x)


@dataclass
class AdjEdge:
    a: tuple
    b: tuple
    groups: frozenset
    geom: tuple  # (point, point) of the shared 1-cell
    voltage: tuple = (0, 0)


class TorusArrangement:
    """Trapezoidal decomposition of input segments on R^2 / lattice."""

    def __init__(self, lattice: Lattice, segments):
        if lattice.dim != 2:
            raise ModeUnavailable("torus arrangements require d = 2")
        self.lattice = lattice
        b1, b2 = lattice.cols
        self.b1, self.b2 = b1, b2
        inv = lattice.inverse_rows()
        zero, one = to_scalar(0), to_scalar(1)
        self._halfplanes = []
        for i in range(2):
            self._halfplanes.append((tuple(-x for x in inv[i]), zero))
            self._halfplanes.append((inv[i], one))
        self.corners = [
            (zero, zero), b1, b2, (b1[0] + b2[0], b1[1] + b2[1]),
        ]
        self.segments = []   # clipped, nonzero length
        self._touch_points = []
        for seg in segments:
            clipped = self._clip(seg)
            if clipped is not None:
                if isinstance(clipped, InputSegment):
                    self.segments.append(clipped)
                else:
                    self._touch_points.append(clipped)
        self._build()

    # -- construction ------------------------------------------------------

    def _clip(self, seg: InputSegment):
        p, q = seg.p, seg.q
        dx, dy = q[0] - p[0], q[1] - p[1]
        s0, s1 = to_scalar(0), to_scalar(1)
        for a, c in self._halfplanes:
            fp = vdot(a, p) - c
            fd = a[0] * dx + a[1] * dy
            sg = fd.sign()
            if sg == 0:
                if fp.sign() > 0:
                    return None
                continue
            bound = -fp / fd
            if sg > 0:
                if bound < s1:
                    s1 = bound
            else:
                if bound > s0:
                    s0 = bound
            if s0 > s1:
                return None
        a0 = (p[0] + s0 * dx, p[1] + s0 * dy)
        a1 = (p[0] + s1 * dx, p[1] + s1 * dy)
        if s0 == s1:
            return a0  # touches the window in a single point
        return InputSegment(a0, a1, seg.groups)

    def _build(self):
        verts = set(self.corners)
        verts.update(self._touch_points)
        for s in self.segments:
            verts.add(s.p)
            verts.add(s.q)
        n = len(self.segments)
        for i in range(n):
            si = self.segments[i]
            di = (si.q[0] - si.p[0], si.q[1] - si.p[1])
            for j in range(i + 1, n):
                sj = self.segments[j]
                dj = (sj.q[0] - sj.p[0], sj.q[1] - sj.p[1])
                denom = _cross(di[0], di[1], dj[0], dj[1])
                w = (sj.p[0] - si.p[0], sj.p[1] - si.p[1])
                if denom.sign() == 0:
                    continue  # parallel; overlap endpoints are already vertices
                s = _cross(w[0], w[1], dj[0], dj[1]) / denom
                u = _cross(w[0], w[1], di[0], di[1]) / denom
                if to_scalar(0) <= s <= to_scalar(1) and to_scalar(0) <= u <= to_scalar(1):
                    verts.add((si.p[0] + s * di[0], si.p[1] + s * di[1]))
        self.vertices = sorted(verts)
        xs = sorted({v[0] for v in self.vertices})
        self.xs = xs
        self.slabs = []
        dom_edges = self._domain_edges()
        for k in range(len(xs) - 1):
            xl, xr = xs[k], xs[k + 1]
            xm = (xl + xr) / 2
            levels = []
            for e in dom_edges:
                p, q = e
                if (q[0] - p[0]).sign() == 0:
                    continue
                if min(p[0], q[0]) <= xl and max(p[0], q[0]) >= xr:
                    levels.append((_seg_y_at(p, q, xm), frozenset(), (p, q)))
            for s in self.segments:
                if (s.q[0] - s.p[0]).sign() == 0:
                    continue
                if min(s.p[0], s.q[0]) <= xl and max(s.p[0], s.q[0]) >= xr:
                    levels.append((_seg_y_at(s.p, s.q, xm), s.groups, (s.p, s.q)))
            levels.sort(key=lambda t: t[0])
            merged = []
            for y, groups, rep in levels:
                if merged and (y - merged[-1].y).sign() == 0:
                    merged[-1].groups = merged[-1].groups | groups
                else:
                    lv = _Level(y, groups, rep)
                    merged.append(lv)
            if len(merged) < 2:
                raise AssertionError("slab lost its domain boundary levels")
            self.slabs.append((xl, xr, xm, merged))

    def _domain_edges(self):
        c00, c10, c01, c11 = self.corners
        return [(c00, c10), (c01, c11), (c00, c01), (c10, c11)]

    # -- evaluation points ---------------------------------------------------

    def face_points(self):
        """(vertices, edge_midpoints, cell_points) covering every face."""
        edge_mids = []
        cell_pts = []
        for xl, xr, xm, levels in self.slabs:
            for lv in levels:
                if lv.groups:
                    edge_mids.append((xm, lv.y))
            for k in range(len(levels) - 1):
                cell_pts.append((xm, (levels[k].y + levels[k + 1].y) / 2))
        for s in self.segments:
            if (s.q[0] - s.p[0]).sign() != 0:
                continue
            x = s.p[0]
            ys = sorted({v[1] for v in self.vertices
                         if (v[0] - x).sign() == 0
                         and min(s.p[1], s.q[1]) <= v[1] <= max(s.p[1], s.q[1])})
            ys = [min(s.p[1], s.q[1])] + ys + [max(s.p[1], s.q[1])]
            for a, b in zip(ys, ys[1:]):
                if (b - a).sign() > 0:
                    edge_mids.append((x, (a + b) / 2))
        return list(self.vertices), edge_mids, cell_pts

    @property
    def cell_count(self):
        return sum(len(levels) - 1 for _, _, _, levels in self.slabs)

    # -- adjacency -------------------------------------------------------------

    def adjacency(self) -> list[AdjEdge]:
        edges = []
        for si, (xl, xr, xm, levels) in enumerate(self.slabs):
            for k in range(1, len(levels)):
                lv = levels[k]
                geom = ((xl, lv.y_at(xl)), (xr, lv.y_at(xr)))
                edges.append(AdjEdge((si, k - 1), (si, k), lv.groups, geom))
        for si in range(len(self.slabs) - 1):
            edges.extend(self._boundary_edges(si, si + 1, self.xs[si + 1]))
        edges.extend(self._glue_edges())
        return edges

    def _stack_ys_at(self, slab_index, x):
        _, _, _, levels = self.slabs[slab_index]
        return [lv.y_at(x) for lv in levels]

    def _locate(self, ys, y):
        for k in range(len(ys) - 1):
            if (ys[k + 1] - ys[k]).sign() > 0 and ys[k] <= y <= ys[k + 1]:
                return k
        raise AssertionError("point not located in trapezoid stack")

    def _vertical_cover_groups(self, x, y):
        groups = set()
        for s in self.segments:
            if (s.q[0] - s.p[0]).sign() != 0 or (s.p[0] - x).sign() != 0:
                continue
            if min(s.p[1], s.q[1]) <= y <= max(s.p[1], s.q[1]):
                groups.update(s.groups)
        return frozenset(groups)

    def _boundary_edges(self, sa, sb, xb):
        lys = self._stack_ys_at(sa, xb)
        rys = self._stack_ys_at(sb, xb)
        breaks = set(lys) | set(rys)
        for s in self.segments:
            if (s.q[0] - s.p[0]).sign() == 0 and (s.p[0] - xb).sign() == 0:
                breaks.add(s.p[1])
                breaks.add(s.q[1])
        lo, hi = lys[0], lys[-1]
        ys = sorted(y for y in breaks if lo <= y <= hi)
        out = []
        for y1, y2 in zip(ys, ys[1:]):
            if (y2 - y1).sign() <= 0:
                continue
            ym = (y1 + y2) / 2
            a = (sa, self._locate(lys, ym))
            b = (sb, self._locate(rys, ym))
            groups = self._vertical_cover_groups(xb, ym)
            out.append(AdjEdge(a, b, groups, ((xb, y1), (xb, y2))))
        return out

    def _glue_edges(self):
        c00, c10, c01, c11 = self.corners
        out = []
        # Edge along b2 glues to its translate by b1; crossing it changes the
        # plane lift by one b1 step.  Likewise for the b1 edge and b2.
        out.extend(self._glue_pair((c00, c01), self.b1, (1, 0)))
        out.extend(self._glue_pair((c00, c10), self.b2, (0, 1)))
        return out

    def _glue_pair(self, edge, offset, voltage):
        p, q = edge
        if (q[0] - p[0]).sign() == 0:
            return self._glue_vertical(edge, offset, voltage)
        return self._glue_chain(edge, offset, voltage)

    def _glue_vertical(self, edge, offset, voltage):
        p, q = edge
        xe = p[0]
        xp = xe + offset[0]
        near_slab = 0 if (xe - self.xs[0]).sign() == 0 else len(self.slabs) - 1
        far_slab = 0 if (xp - self.xs[0]).sign() == 0 else len(self.slabs) - 1
        lys = self._stack_ys_at(near_slab, xe)
        rys = self._stack_ys_at(far_slab, xp)
        breaks = set(lys) | {y - offset[1] for y in rys}
        for s in self.segments:
            if (s.q[0] - s.p[0]).sign() != 0:
                continue
            if (s.p[0] - xe).sign() == 0:
                breaks.update((s.p[1], s.q[1]))
            if (s.p[0] - xp).sign() == 0:
                breaks.update((s.p[1] - offset[1], s.q[1] - offset[1]))
        lo, hi = min(p[1], q[1]), max(p[1], q[1])
        ys = sorted(y for y in breaks if lo <= y <= hi)
        out = []
        for y1, y2 in zip(ys, ys[1:]):
            if (y2 - y1).sign() <= 0:
                continue
            ym = (y1 + y2) / 2
            a = (near_slab, self._locate(lys, ym))
            b = (far_slab, self._locate(rys, ym + offset[1]))
            groups = self._vertical_cover_groups(xe, ym) | \
                self._vertical_cover_groups(xp, ym + offset[1])
            out.append(AdjEdge(a, b, groups, ((xe, y1), (xe, y2)), voltage))
        return out

    def _glue_chain(self, edge, offset, voltage):
        p, q = edge
        if p[0] > q[0]:
            p, q = q, p
        xa, xb = p[0], q[0]
        breaks = {x for x in self.xs if xa <= x <= xb}
        breaks.update({x - offset[0] for x in self.xs if xa + offset[0] <= x <= xb + offset[0]})
        for s in self.segments:
            for line_p, line_q, shift in ((p, q, to_scalar(0)),
                                          ((p[0] + offset[0], p[1] + offset[1]),
                                           (q[0] + offset[0], q[1] + offset[1]), offset[0])):
                if _colinear(line_p, line_q, s):
                    for x in (s.p[0], s.q[0]):
                        xx = x - shift
                        if xa <= xx <= xb:
                            breaks.add(xx)
        xs = sorted(breaks)
        out = []
        for x1, x2 in zip(xs, xs[1:]):
            if (x2 - x1).sign() <= 0:
                continue
            xm = (x1 + x2) / 2
            a = self._chain_face(xm, _seg_y_at(p, q, xm))
            b = self._chain_face(xm + offset[0], _seg_y_at(p, q, xm) + offset[1])
            groups = self._line_cover_groups(p, q, xm) | self._line_cover_groups(
                (p[0] + offset[0], p[1] + offset[1]),
                (q[0] + offset[0], q[1] + offset[1]), xm + offset[0])
            geom = ((x1, _seg_y_at(p, q, x1)), (x2, _seg_y_at(p, q, x2)))
            out.append(AdjEdge(a, b, groups, geom, voltage))
        return out

    def _chain_face(self, x, y):
        si = self._slab_of(x)
        _, _, _, levels = self.slabs[si]
        y_here = [lv.y_at(x) for lv in levels]
        if (y - y_here[0]).sign() == 0:
            return (si, 0)
        if (y - y_here[-1]).sign() == 0:
            return (si, len(levels) - 2)
        raise AssertionError("glue point is not on the domain boundary chain")

    def _slab_of(self, x):
        for si, (xl, xr, _, _) in enumerate(self.slabs):
            if xl < x < xr:
                return si
        raise AssertionError("x does not lie strictly inside a slab")

    def _line_cover_groups(self, p, q, x):
        groups = set()
        for s in self.segments:
            if _colinear(p, q, s) and min(s.p[0], s.q[0]) <= x <= max(s.p[0], s.q[0]):
                groups.update(s.groups)
        return frozenset(groups)

    # -- connectivity -----------------------------------------------------------

    def connectivity(self, blocked) -> tuple[bool, list[AdjEdge]]:
        """(plane_connected, separating_blocked_edges) with 1-cells carrying
        ``groups`` removed whenever ``blocked(groups)`` holds.

        Torus components must be one AND the traversable glue cycles of that
        component must generate all of Z^2; otherwise the lifted complement in
        the plane is disconnected.
        """
        edges = self.adjacency()
        nodes = {e.a for e in edges} | {e.b for e in edges}
        for si, (_, _, _, levels) in enumerate(self.slabs):
            for k in range(len(levels) - 1):
                nodes.add((si, k))
        parent = {v: v for v in nodes}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        open_edges = []
        blocked_edges = []
        for e in edges:
            if e.groups and blocked(e.groups):
                blocked_edges.append(e)
            else:
                open_edges.append(e)
                ra, rb = find(e.a), find(e.b)
                if ra != rb:
                    parent[ra] = rb
        roots = {find(v) for v in nodes}
        if len(roots) > 1:
            separating = [e for e in blocked_edges if find(e.a) != find(e.b)]
            return False, separating
        # One torus component: check that glue voltages span Z^2.
        pot = {}
        start = next(iter(nodes))
        pot[start] = (0, 0)
        adj = {}
        for e in open_edges:
            adj.setdefault(e.a, []).append((e.b, e.voltage))
            adj.setdefault(e.b, []).append((e.a, (-e.voltage[0], -e.voltage[1])))
        stack = [start]
        while stack:
            u = stack.pop()
            for w, v in adj.get(u, ()):
                if w not in pot:
                    pot[w] = (pot[u][0] + v[0], pot[u][1] + v[1])
                    stack.append(w)
        cycles = []
        for e in open_edges:
            pa, pb = pot[e.a], pot[e.b]
            cv = (pa[0] + e.voltage[0] - pb[0], pa[1] + e.voltage[1] - pb[1])
            if cv != (0, 0):
                cycles.append(cv)
        index = hnf_subgroup_index(cycles)
        if index == 1:
            return True, []
        return False, blocked_edges


def _colinear(p, q, seg: InputSegment) -> bool:
    dx, dy = q[0] - p[0], q[1] - p[1]
    for pt in (seg.p, seg.q):
        if _cross(dx, dy, pt[0] - p[0], pt[1] - p[1]).sign() != 0:
            return False
    return True


def supporting_lines(edges) -> list[tuple]:
    """Distinct supporting lines of adjacency-edge geometry as (a, b, c): ax+by=c.

    Normalized so the first nonzero coefficient is 1; sorted for determinism.
    """
    lines = {}
    for e in edges:
        (x1, y1), (x2, y2) = e.geom
        a, b = y2 - y1, x1 - x2
        c = a * x1 + b * y1
        lead = a if a.sign() != 0 else b
        a, b, c = a / lead, b / lead, c / lead
        lines[(a, b, c)] = True
    return sorted(lines)
