"""Translate-count functions: how many translation points land in -P + v.

``count_half_open`` / ``count_closed`` evaluate the number of translation
points (with multiplicity) contained in the translate of the reflected
(half-open) polytope by v; constancy of the half-open count over all v is
equivalent to the tiling property.  The reflected polytope is never
materialized: membership is tested as v - landa in P.
"""

from __future__ import annotations

import itertools

from .errors import InputError
from .lattice import Coset, QuasiPeriodicSet, WindowMultiset, _iter_runs
from .linalg import as_vec, mat_vec, vdot
from .polytope import HalfOpenPolytope, Polytope, ProbeDirection, contains_half_open
from .scalar import to_scalar


class _CosetEvaluator:
    """Per-coset cached transforms for repeated count queries."""

    def __init__(self, coset: Coset, polytope: Polytope, probe: ProbeDirection):
        self.weight = coset.weight
        lat, t = coset.lattice, coset.translation
        self.inv = lat.inverse_rows()
        self.dim = lat.dim
        hv = as_vec(probe.h)
        self.normals = [n for n, _ in polytope.facets]
        # v - t - B n in P^h:  <-a^T B, n> <= c - <a, v> + <a, t>
        self.g = [tuple(-vdot(a, col) for col in lat.cols) for a in self.normals]
        self.rhs_base = [c + vdot(a, t) for a, (_, c) in zip(self.normals, polytope.facets)]
        self.strict = [vdot(a, hv).sign() > 0 for a in self.normals]
        verts = polytope.vertices
        if verts is None:
            lo, hi = polytope.bounding_box()
            verts = [tuple(hi[i] if b else lo[i] for i, b in enumerate(bits))
                     for bits in itertools.product((0, 1), repeat=polytope.dim)]
        self.w = [mat_vec(self.inv, tuple(p + ti for p, ti in zip(vertex, t)))
                  for vertex in verts]

    def count(self, v, boundary: str) -> int:
        """boundary: "half" (probe rule), "closed", or "interior" (all strict)."""
        u = mat_vec(self.inv, v)
        d = self.dim
        lo, hi = [None] * d, [None] * d
        for w in self.w:
            for i in range(d):
                c = u[i] - w[i]
                if lo[i] is None or c < lo[i]:
                    lo[i] = c
                if hi[i] is None or c > hi[i]:
                    hi[i] = c
        lo = [x.floor() for x in lo]
        hi = [-((-x).floor()) for x in hi]
        if any(l > h for l, h in zip(lo, hi)):
            return 0
        cons = []
        for a, g, rb, st in zip(self.normals, self.g, self.rhs_base, self.strict):
            if boundary == "half":
                strict = st
            else:
                strict = boundary == "interior"
            cons.append((g, rb - vdot(a, v), strict))
        total = 0
        for _, klo, khi in _iter_runs(cons, lo, hi):
            total += khi - klo + 1
        return total * self.weight


class EnumeratorContext:
    """A polytope, a probe, and a translation set, ready for count queries."""

    def __init__(self, polytope: Polytope, probe: ProbeDirection, translations):
        probe.validate_for(polytope)
        self.polytope = polytope
        self.probe = probe
        self.translations = translations
        self._hop = HalfOpenPolytope(polytope, probe)
        if isinstance(translations, QuasiPeriodicSet):
            self._evals = [_CosetEvaluator(c, polytope, probe) for c in translations.cosets]
            self._window = None
        elif isinstance(translations, WindowMultiset):
            self._evals = None
            self._window = translations
        else:
            raise InputError("translations must be a QuasiPeriodicSet or WindowMultiset")

    def count_half_open(self, v) -> int:
        v = as_vec(v)
        if self._window is not None:
            return _window_count(self.polytope, self._hop, self._window, v, "half")
        return sum(e.count(v, "half") for e in self._evals)

    def count_closed(self, v) -> int:
        v = as_vec(v)
        if self._window is not None:
            return _window_count(self.polytope, self._hop, self._window, v, "closed")
        return sum(e.count(v, "closed") for e in self._evals)

    def count_interior(self, v) -> int:
        v = as_vec(v)
        if self._window is not None:
            return _window_count(self.polytope, self._hop, self._window, v, "interior")
        return sum(e.count(v, "interior") for e in self._evals)


def _window_count(polytope, hop, window: WindowMultiset, v, boundary: str) -> int:
    total = 0
    for lam, mult in window.points:
        w = tuple(x - y for x, y in zip(v, lam))
        if boundary == "half":
            inside = contains_half_open(hop, w)
        elif boundary == "closed":
            inside = polytope.contains_closed(w)
        else:
            inside = polytope.contains_closed(w) and not polytope.active_facets(w)
        if inside:
            total += mult
    return total


def L_half_open(ctx: EnumeratorContext, v) -> int:
    return ctx.count_half_open(v)


def L_closed(ctx: EnumeratorContext, v) -> int:
    return ctx.count_closed(v)


def coverage_count(polytope: Polytope, mode, window: WindowMultiset, v) -> int:
    """Direct indicator sum over a finite window: sum of m * 1[v in P^mode + l].

    ``mode`` is "closed" or a ProbeDirection for half-open membership.  This
    is the independent oracle for the translate-count identity.
    """
    v = as_vec(v)
    total = 0
    if mode == "closed":
        for lam, mult in window.points:
            if polytope.contains_closed(tuple(x - y for x, y in zip(v, lam))):
                total += mult
        return total
    if not isinstance(mode, ProbeDirection):
        raise InputError('mode must be "closed" or a ProbeDirection')
    hop = HalfOpenPolytope(polytope, mode)
    for lam, mult in window.points:
        if contains_half_open(hop, tuple(x - y for x, y in zip(v, lam))):
            total += mult
    return total
