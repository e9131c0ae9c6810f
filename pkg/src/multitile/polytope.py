"""Convex polytopes in H-representation and their half-open counterparts.

A polytope is a bounded, full-dimensional intersection of half-spaces
``<normal, x> <= offset``.  The half-open counterpart keeps the boundary
points from which a short step along a probe direction enters the interior;
with a probe that is non-orthogonal to every facet normal this reduces to a
finite test on the active facets.
"""

from __future__ import annotations

import itertools
from functools import cmp_to_key

from .errors import DimensionUnsupported, InputError
from .linalg import Vec, as_vec, solve_linear, vdot, vsub
from .linprog import maximize_over_polyhedron
from .scalar import Scalar, to_scalar


class Polytope:
    """Bounded full-dimensional convex polytope, facets ``<n_i, x> <= c_i``."""

    def __init__(self, facets, vertices=None, _skip_checks=False):
        facets = [(as_vec(n), to_scalar(c)) for n, c in facets]
        if not facets:
            raise InputError("a polytope needs at least one facet")
        d = len(facets[0][0])
        if any(len(n) != d for n, _ in facets):
            raise InputError("facet normals have inconsistent dimensions")
        self.dim = d
        self.facets = _dedupe_facets(facets)
        self.vertices = tuple(as_vec(v) for v in vertices) if vertices is not None else None
        self._bbox = None
        if not _skip_checks:
            self._validate()
        if self.vertices is None and d <= 2:
            self.vertices = _vertices_from_facets(self.facets, d)

    def _validate(self):
        d = self.dim
        if any(all(x.sign() == 0 for x in n) for n, _ in self.facets):
            raise InputError("zero facet normal")
        lo, hi = [], []
        for i in range(d):
            e = [to_scalar(1 if j == i else 0) for j in range(d)]
            for obj, out in ((e, hi), ([-x for x in e], lo)):
                res = maximize_over_polyhedron(
                    obj, [n for n, _ in self.facets], [c for _, c in self.facets]
                )
                if res.status == "infeasible":
                    raise InputError("polytope is empty")
                if res.status == "unbounded":
                    raise InputError("polytope is unbounded")
                out.append(res.objective)
        self._bbox = (tuple(-x for x in lo), tuple(hi))
        # Full-dimensionality: some point satisfies every inequality strictly.
        rows = [list(n) + [to_scalar(1)] for n, _ in self.facets]
        rows.append([to_scalar(0)] * d + [to_scalar(1)])
        rhs = [c for _, c in self.facets] + [to_scalar(1)]
        res = maximize_over_polyhedron([to_scalar(0)] * d + [to_scalar(1)], rows, rhs)
        if res.status != "optimal" or res.objective.sign() <= 0:
            raise InputError("polytope is not full-dimensional")
        if self.vertices is not None:
            for v in self.vertices:
                if not self.contains_closed(v):
                    raise InputError(f"declared vertex {v} violates a facet")

    def bounding_box(self) -> tuple[Vec, Vec]:
        """Per-coordinate (lo, hi) vectors; exact."""
        if self._bbox is None:
            vs = self.vertices
            if vs:
                lo = tuple(min((v[i] for v in vs), default=to_scalar(0)) for i in range(self.dim))
                hi = tuple(max((v[i] for v in vs), default=to_scalar(0)) for i in range(self.dim))
                self._bbox = (lo, hi)
            else:
                self._validate()
        return self._bbox

    def contains_closed(self, v) -> bool:
        v = as_vec(v)
        return all((vdot(n, v) - c).sign() <= 0 for n, c in self.facets)

    def active_facets(self, v) -> list[int]:
        """Indices of facets with <n, v> = c (assumes v in the closure)."""
        v = as_vec(v)
        return [i for i, (n, c) in enumerate(self.facets) if (vdot(n, v) - c).sign() == 0]

    def edges_2d(self) -> list[tuple[Vec, Vec]]:
        """Boundary edges as vertex pairs (2D only, hull order)."""
        if self.dim != 2:
            raise DimensionUnsupported("edges_2d requires d = 2")
        vs = self.vertices
        if not vs or len(vs) < 3:
            raise InputError("2D polytope has no usable vertex cycle")
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def __repr__(self):
        return f"Polytope(d={self.dim}, facets={len(self.facets)})"


class ProbeDirection:
    """Integer direction not orthogonal to any facet normal of its polytope."""

    def __init__(self, h, polytope: Polytope | None = None):
        self.h = tuple(int(x) for x in h)
        if all(x == 0 for x in self.h):
            raise InputError("probe direction must be nonzero")
        if polytope is not None:
            self.validate_for(polytope)

    def validate_for(self, polytope: Polytope):
        hv = as_vec(self.h)
        for n, _ in polytope.facets:
            if vdot(n, hv).sign() == 0:
                raise InputError(f"probe {self.h} is orthogonal to facet normal {n}")

    def __eq__(self, other):
        return isinstance(other, ProbeDirection) and self.h == other.h

    def __repr__(self):
        return f"ProbeDirection({self.h})"


class HalfOpenPolytope:
    """A polytope with a probe direction fixing the boundary-inclusion rule."""

    def __init__(self, base: Polytope, probe: ProbeDirection):
        probe.validate_for(base)
        self.base = base
        self.probe = probe

    @property
    def dim(self):
        return self.base.dim

    def __repr__(self):
        return f"HalfOpenPolytope({self.base!r}, {self.probe!r})"


def contains_closed(p: Polytope, v) -> bool:
    return p.contains_closed(v)


def contains_half_open(hop: HalfOpenPolytope, v) -> bool:
    """Membership in the half-open counterpart.

    True iff v is in the closure and every active facet satisfies
    <n, h> < 0, i.e. a short step along the probe enters the open side of
    every facet through v.
    """
    v = as_vec(v)
    p = hop.base
    hv = as_vec(hop.probe.h)
    for n, c in p.facets:
        s = (vdot(n, v) - c).sign()
        if s > 0:
            return False
        if s == 0 and vdot(n, hv).sign() > 0:
            return False
    return True


def _probe_candidates(d: int):
    """Integer vectors ordered by max-norm, then lexicographically preferring
    larger entries; matches the documented deterministic probe selection."""
    k = 1
    while True:
        rng = list(range(k, -k - 1, -1))
        for cand in itertools.product(rng, repeat=d):
            if max(abs(x) for x in cand) == k:
                yield cand
        k += 1


def find_probe_direction(p: Polytope) -> ProbeDirection:
    """First candidate (max-norm order, larger entries first) valid for p."""
    hv_cache = {}
    for cand in _probe_candidates(p.dim):
        hv = hv_cache.get(cand)
        if hv is None:
            hv = as_vec(cand)
            hv_cache[cand] = hv
        if all(vdot(n, hv).sign() != 0 for n, _ in p.facets):
            return ProbeDirection(cand)
    raise AssertionError("unreachable: valid probe directions are cofinite")


def from_vertices(vertices) -> Polytope:
    """H-representation of the convex hull of the given points.

    Supports d <= 2 in general and axis-aligned boxes in any dimension;
    other vertex sets in d >= 3 raise DimensionUnsupported.
    """
    pts = [as_vec(v) for v in vertices]
    if not pts:
        raise InputError("empty vertex set")
    d = len(pts[0])
    if any(len(v) != d for v in pts):
        raise InputError("vertices have inconsistent dimensions")
    if d == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        if (hi - lo).sign() <= 0:
            raise InputError("degenerate 1D polytope")
        facets = [((to_scalar(-1),), -lo), ((to_scalar(1),), hi)]
        return Polytope(facets, vertices=[(lo,), (hi,)], _skip_checks=True)
    if d == 2:
        return _hull_2d(pts)
    return _box_from_vertices(pts, d)


def _hull_2d(pts) -> Polytope:
    uniq = sorted(set(pts), key=lambda p: (p[0], p[1]))
    if len(uniq) < 3:
        raise InputError("degenerate 2D polytope (fewer than 3 distinct vertices)")

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p).sign() <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(uniq):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p).sign() <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise InputError("degenerate 2D polytope (collinear vertices)")
    facets = []
    for i in range(len(hull)):
        p, q = hull[i], hull[(i + 1) % len(hull)]
        n = (q[1] - p[1], p[0] - q[0])  # outward for CCW orientation
        facets.append((n, vdot(as_vec(n), p)))
    return Polytope(facets, vertices=hull, _skip_checks=True)


def _box_from_vertices(pts, d) -> Polytope:
    lo = [min(p[i] for p in pts) for i in range(d)]
    hi = [max(p[i] for p in pts) for i in range(d)]
    if any((hi[i] - lo[i]).sign() <= 0 for i in range(d)):
        raise InputError("degenerate box (zero extent in some coordinate)")
    expected = {tuple(hi[i] if bit else lo[i] for i, bit in enumerate(bits))
                for bits in itertools.product((0, 1), repeat=d)}
    if set(pts) != expected:
        raise DimensionUnsupported(
            "general convex hulls are unsupported for d >= 3; "
            "supply the H-representation directly"
        )
    facets = []
    for i in range(d):
        e_pos = tuple(to_scalar(1 if j == i else 0) for j in range(d))
        e_neg = tuple(to_scalar(-1 if j == i else 0) for j in range(d))
        facets.append((e_pos, hi[i]))
        facets.append((e_neg, -lo[i]))
    return Polytope(facets, vertices=sorted(expected), _skip_checks=True)


def _dedupe_facets(facets):
    seen = set()
    out = []
    for n, c in facets:
        lead = next((x for x in n if x.sign() != 0), None)
        if lead is None:
            out.append((n, c))  # caught by validation
            continue
        scale = to_scalar(1) / lead if lead.sign() > 0 else to_scalar(-1) / lead
        key = (tuple(x * scale for x in n), c * scale)
        if key not in seen:
            seen.add(key)
            out.append((n, c))
    return out


def _vertices_from_facets(facets, d):
    """Vertex list for d <= 2 H-representations (CCW order for d = 2)."""
    if d == 1:
        los = [c / n[0] for n, c in facets if n[0].sign() < 0]
        his = [c / n[0] for n, c in facets if n[0].sign() > 0]
        return (tuple([max(los)]), tuple([min(his)]))
    pts = set()
    for (n1, c1), (n2, c2) in itertools.combinations(facets, 2):
        det = n1[0] * n2[1] - n1[1] * n2[0]
        if det.sign() == 0:
            continue
        x = (c1 * n2[1] - c2 * n1[1]) / det
        y = (n1[0] * c2 - n2[0] * c1) / det
        v = (x, y)
        if all((vdot(n, v) - c).sign() <= 0 for n, c in facets):
            pts.add(v)
    if len(pts) < 3:
        raise InputError("2D polytope has fewer than 3 vertices")
    return _ccw_order(list(pts))


def _ccw_order(pts):
    n = len(pts)
    cx = sum((p[0] for p in pts), to_scalar(0)) / n
    cy = sum((p[1] for p in pts), to_scalar(0)) / n

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        sy = dy.sign()
        if sy != 0:
            return 0 if sy > 0 else 1
        return 0 if dx.sign() > 0 else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        ax, ay = a[0] - cx, a[1] - cy
        bx, by = b[0] - cx, b[1] - cy
        cr = (ax * by - ay * bx).sign()
        return -cr

    return tuple(sorted(pts, key=cmp_to_key(cmp)))
