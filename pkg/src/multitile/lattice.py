"""Lattices, translated lattices (cosets), quasi-periodic sets, enumeration.

Point enumeration maps the target region into lattice coordinates, walks an
integer box, and solves the innermost coordinate's feasible range in closed
form, so points are emitted in runs without per-point membership tests.  On
all-rational data the walk runs on plain integers; otherwise it runs on exact
scalars.
"""

from __future__ import annotations

import gc
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .linalg import Vec, as_vec, column_hnf, determinant, integer_kernel, invert, mat_vec, vdot
from .polytope import HalfOpenPolytope, Polytope, ProbeDirection, find_probe_direction
from .scalar import Scalar, _rat_scalar, to_scalar


class Lattice:
    """Full-rank lattice given by basis column vectors."""

    def __init__(self, columns):
        cols = tuple(as_vec(c) for c in columns)
        d = len(cols)
        if d == 0 or any(len(c) != d for c in cols):
            raise InputError("lattice basis must be a nonempty square matrix")
        self.cols = cols
        self.dim = d
        self.rows = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
        if determinant(self.rows).sign() == 0:
            raise InputError("lattice basis is singular")
        self._inv = None
        self._canon = None

    @staticmethod
    def standard(d: int) -> "Lattice":
        return Lattice([[1 if i == j else 0 for i in range(d)] for j in range(d)])

    @property
    def is_rational(self) -> bool:
        return all(x.is_rational for col in self.cols for x in col)

    def inverse_rows(self):
        if self._inv is None:
            self._inv = invert(self.rows)
        return self._inv

    def coords(self, v) -> Vec:
        """c with basis @ c = v, exact."""
        return mat_vec(self.inverse_rows(), as_vec(v))

    def point(self, n) -> Vec:
        """basis @ n for an integer (or scalar) coordinate vector."""
        out = [to_scalar(0)] * self.dim
        for j, k in enumerate(n):
            if k:
                col = self.cols[j]
                out = [a + col_i * k for a, col_i in zip(out, col)]
        return tuple(out)

    def scale(self, factor) -> "Lattice":
        factor = to_scalar(factor)
        return Lattice([tuple(x * factor for x in col) for col in self.cols])

    def canonical_columns(self):
        """Canonical basis columns: column HNF for rational lattices, raw otherwise."""
        if self._canon is None:
            if not self.is_rational:
                self._canon = self.cols
            else:
                s = _lcm_denominators(x.rat for col in self.cols for x in col)
                m = [[int(self.cols[j][i].rat * s) for j in range(self.dim)]
                     for i in range(self.dim)]
                h = column_hnf(m)
                self._canon = tuple(
                    tuple(to_scalar(Fraction(h[i][j], s)) for i in range(self.dim))
                    for j in range(len(h[0]))
                )
        return self._canon

    def same_lattice(self, other: "Lattice") -> bool:
        if self.dim != other.dim:
            return False
        return self.canonical_columns() == other.canonical_columns()

    def contains_point(self, v) -> bool:
        """True iff v is a lattice point (integral coordinates)."""
        return all(c.is_rational and c.rat.denominator == 1 for c in self.coords(v))

    def __repr__(self):
        return f"Lattice(d={self.dim})"


@dataclass(frozen=True)
class Coset:
    """Translated lattice with an integer multiplicity attached to every point."""

    lattice: Lattice
    translation: Vec
    weight: int = 1

    def __post_init__(self):
        object.__setattr__(self, "translation", as_vec(self.translation))
        if len(self.translation) != self.lattice.dim:
            raise InputError("coset translation dimension mismatch")
        if self.weight < 1:
            raise InputError("coset weight must be >= 1")


@dataclass(frozen=True)
class QuasiPeriodicSet:
    """Finite weighted union of lattice cosets."""

    cosets: tuple[Coset, ...]

    def __post_init__(self):
        cosets = tuple(self.cosets)
        if not cosets:
            raise InputError("quasi-periodic set needs at least one coset")
        if len({c.lattice.dim for c in cosets}) != 1:
            raise InputError("all cosets must share one dimension")
        object.__setattr__(self, "cosets", cosets)

    @property
    def dim(self) -> int:
        return self.cosets[0].lattice.dim


@dataclass(frozen=True)
class WindowMultiset:
    """Explicit finite multiset of translation vectors."""

    points: tuple[tuple[Vec, int], ...]

    def __post_init__(self):
        pts = tuple((as_vec(p), int(m)) for p, m in self.points)
        if any(m < 1 for _, m in pts):
            raise InputError("window multiplicities must be >= 1")
        object.__setattr__(self, "points", pts)

    @staticmethod
    def _wrap(points) -> "WindowMultiset":
        """Trusted constructor for already-validated Scalar points."""
        w = object.__new__(WindowMultiset)
        object.__setattr__(w, "points", points)
        return w


def lattice_coords(lattice: Lattice, v) -> Vec:
    return lattice.coords(v)


def refine_lattice(lattice: Lattice, n: int) -> Lattice:
    if n < 1:
        raise InputError("refinement factor must be a positive integer")
    return lattice.scale(Fraction(1, n))


def common_period(q: QuasiPeriodicSet) -> Lattice | None:
    """A lattice L0 with Q + l = Q (as weighted sets) for all l in L0, or None.

    Shared lattices are recognized by canonical-basis equality; families of
    distinct rational lattices are intersected by integer-matrix methods.
    """
    lattices = [c.lattice for c in q.cosets]
    first = lattices[0]
    if all(lat.same_lattice(first) for lat in lattices[1:]):
        if first.is_rational:
            return Lattice(first.canonical_columns())
        return first
    if not all(lat.is_rational for lat in lattices):
        return None
    acc = lattices[0]
    for lat in lattices[1:]:
        if not acc.same_lattice(lat):
            acc = _intersect_rational(acc, lat)
    return Lattice(acc.canonical_columns())


def _lcm_denominators(fracs) -> int:
    s = 1
    for f in fracs:
        s = s * f.denominator // math.gcd(s, f.denominator)
    return s


def _intersect_rational(a: Lattice, b: Lattice) -> Lattice:
    d = a.dim
    s = _lcm_denominators(
        x.rat for lat in (a, b) for col in lat.cols for x in col
    )
    ma = [[int(a.cols[j][i].rat * s) for j in range(d)] for i in range(d)]
    mb = [[int(b.cols[j][i].rat * s) for j in range(d)] for i in range(d)]
    stacked = [ma[i] + [-x for x in mb[i]] for i in range(d)]
    kernel = integer_kernel(stacked)  # 2d x d, rows
    u = kernel[:d]
    cols = []
    for jj in range(len(u[0])):
        col = [sum(ma[i][k] * u[k][jj] for k in range(d)) for i in range(d)]
        cols.append([Fraction(x, s) for x in col])
    return Lattice(cols)


def fundamental_domain(lattice: Lattice) -> HalfOpenPolytope:
    """Half-open parallelepiped basis @ [0,1)^d anchored at the origin.

    The exact boundary selection follows the deterministically chosen probe;
    any valid probe yields a fundamental domain (each orbit is hit once).
    """
    inv = lattice.inverse_rows()
    d = lattice.dim
    facets = []
    for i in range(d):
        facets.append((tuple(-x for x in inv[i]), to_scalar(0)))
        facets.append((inv[i], to_scalar(1)))
    corners = [
        lattice.point(bits) for bits in itertools.product((0, 1), repeat=d)
    ]
    base = Polytope(facets, vertices=corners, _skip_checks=True)
    return HalfOpenPolytope(base, find_probe_direction(base))


# -- enumeration -------------------------------------------------------------


def membership_constraints(polytope: Polytope, probe: ProbeDirection | None):
    """Facet constraints [(normal, offset, strict)] for closed or half-open mode."""
    if probe is None:
        return [(n, c, False) for n, c in polytope.facets]
    hv = as_vec(probe.h)
    return [(n, c, vdot(n, hv).sign() > 0) for n, c in polytope.facets]


def enumerate_in_polytope(coset: Coset, polytope: Polytope,
                          probe: ProbeDirection | None = None) -> WindowMultiset:
    """All coset points in the polytope (closed, or half-open along ``probe``)."""
    cons = membership_constraints(polytope, probe)
    bound_pts = polytope.vertices
    if bound_pts is None:
        lo, hi = polytope.bounding_box()
        bound_pts = [
            tuple(hi[i] if bit else lo[i] for i, bit in enumerate(bits))
            for bits in itertools.product((0, 1), repeat=polytope.dim)
        ]
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        pts = list_coset_points(coset, cons, bound_pts)
        w = coset.weight
        return WindowMultiset._wrap(tuple((p, w) for p in pts))
    finally:
        if was_enabled:
            gc.enable()


def _coord_bounds(lattice: Lattice, translation: Vec, bound_points):
    """Integer per-coordinate ranges covering the mapped bound points."""
    inv = lattice.inverse_rows()
    d = lattice.dim
    los, his = [None] * d, [None] * d
    for p in bound_points:
        c = mat_vec(inv, tuple(x - t for x, t in zip(p, translation)))
        for i in range(d):
            if los[i] is None or c[i] < los[i]:
                los[i] = c[i]
            if his[i] is None or c[i] > his[i]:
                his[i] = c[i]
    return [x.floor() for x in los], [-((-x).floor()) for x in his]


def _transform_constraints(lattice: Lattice, translation: Vec, constraints):
    """Rewrite x-space facet constraints onto lattice coordinates n.

    x = t + B n turns <a, x> <= c into <B^T a, n> <= c - <a, t>.
    """
    out = []
    for a, c, strict in constraints:
        g = tuple(vdot(a, col) for col in lattice.cols)
        r = c - vdot(a, translation)
        out.append((g, r, strict))
    return out


def _all_rational(values) -> bool:
    return all(v.is_rational for v in values)


def count_coset_points(coset: Coset, constraints, bound_points) -> int:
    """Weighted count of coset points satisfying all constraints."""
    lat, t = coset.lattice, coset.translation
    lo, hi = _coord_bounds(lat, t, bound_points)
    if any(l > h for l, h in zip(lo, hi)):
        return 0
    cons = _transform_constraints(lat, t, constraints)
    total = 0
    for _, klo, khi in _iter_runs(cons, lo, hi):
        total += khi - klo + 1
    return total * coset.weight


def list_coset_points(coset: Coset, constraints, bound_points) -> list[Vec]:
    """Coset points satisfying all constraints, in lattice-coordinate lex order."""
    lat, t = coset.lattice, coset.translation
    lo, hi = _coord_bounds(lat, t, bound_points)
    if any(l > h for l, h in zip(lo, hi)):
        return []
    cons = _transform_constraints(lat, t, constraints)
    d = lat.dim
    rational = (
        _all_rational(t)
        and lat.is_rational
        and all(_all_rational(g) and r.is_rational for g, r, _ in cons)
    )
    if rational:
        return _list_points_int(lat, t, cons, lo, hi, d)
    out = []
    last_col = lat.cols[d - 1]
    for prefix, klo, khi in _iter_runs(cons, lo, hi):
        base = lat.point(prefix + (klo,))
        x = [ti + bi for ti, bi in zip(t, base)]
        for k in range(klo, khi + 1):
            out.append(tuple(x))
            if k < khi:
                x = [a + c for a, c in zip(x, last_col)]
    return out


def _iter_runs(cons, lo, hi):
    """Yield (prefix, k_lo, k_hi) feasible runs of the innermost coordinate.

    ``cons`` are (g, r, strict) lattice-coordinate constraints; the innermost
    feasible k-range is solved exactly per outer prefix.
    """
    d = len(lo)
    outer = [range(lo[i], hi[i] + 1) for i in range(d - 1)]
    for prefix in itertools.product(*outer):
        klo, khi = lo[d - 1], hi[d - 1]
        ok = True
        for g, r, strict in cons:
            s = r
            for gj, nj in zip(g, prefix):
                if nj:
                    s = s - gj * nj
            gd = g[d - 1]
            sg = gd.sign()
            if sg == 0:
                ss = s.sign()
                if ss < 0 or (strict and ss == 0):
                    ok = False
                    break
            else:
                q = s / gd
                f = q.floor()
                exact = (q - f).sign() == 0
                if sg > 0:
                    # k <= q (or k < q): largest admissible integer
                    ub = f - 1 if (strict and exact) else f
                    if ub < khi:
                        khi = ub
                else:
                    # k >= q (or k > q): smallest admissible integer
                    lb = f if (exact and not strict) else f + 1
                    if lb > klo:
                        klo = lb
            if klo > khi:
                ok = False
                break
        if not ok or klo > khi:
            continue
        yield prefix, klo, khi


def _list_points_int(lat: Lattice, t: Vec, cons, lo, hi, d):
    """Integer fast path: scaled-integer walk, Fractions only at emission.

    The collector is paused during emission: the output is a flat list of
    acyclic objects and periodic generational scans over it are pure overhead.
    """
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        return _list_points_int_inner(lat, t, cons, lo, hi, d)
    finally:
        if was_enabled:
            gc.enable()


def _list_points_int_inner(lat: Lattice, t: Vec, cons, lo, hi, d):
    s = _lcm_denominators(
        itertools.chain(
            (x.rat for col in lat.cols for x in col),
            (x.rat for x in t),
        )
    )
    cols_s = [[int(x.rat * s) for x in col] for col in lat.cols]
    t_s = [int(x.rat * s) for x in t]
    icons = []
    for g, r, strict in cons:
        cs = _lcm_denominators(itertools.chain((x.rat for x in g), (r.rat,)))
        icons.append((
            [int(x.rat * cs) for x in g], int(r.rat * cs), strict,
        ))
    out = []
    outer = [range(lo[i], hi[i] + 1) for i in range(d - 1)]
    last = cols_s[d - 1]
    for prefix in itertools.product(*outer):
        klo, khi = lo[d - 1], hi[d - 1]
        feasible = True
        for g, r, strict in icons:
            acc = r
            for gj, nj in zip(g, prefix):
                if nj:
                    acc -= gj * nj
            gd = g[d - 1]
            if gd == 0:
                if acc < 0 or (strict and acc == 0):
                    feasible = False
                    break
            elif gd > 0:
                q, rem = divmod(acc, gd)
                ub = q - 1 if (strict and rem == 0) else q
                if ub < khi:
                    khi = ub
            else:
                q, rem = divmod(acc, gd)
                lb = q if rem == 0 and not strict else q + 1
                if lb > klo:
                    klo = lb
            if klo > khi:
                feasible = False
                break
        if not feasible or klo > khi:
            continue
        base = list(t_s)
        for j, nj in enumerate(prefix):
            if nj:
                cj = cols_s[j]
                for i in range(d):
                    base[i] += nj * cj[i]
        for i in range(d):
            base[i] += klo * last[i]
        emit = out.append
        rs = _rat_scalar
        if d == 3:
            b0, b1, b2 = base
            l0, l1, l2 = last
            for _ in range(khi - klo):
                emit((rs(b0, s), rs(b1, s), rs(b2, s)))
                b0 += l0
                b1 += l1
                b2 += l2
            emit((rs(b0, s), rs(b1, s), rs(b2, s)))
        elif d == 2:
            b0, b1 = base
            l0, l1 = last
            for _ in range(khi - klo):
                emit((rs(b0, s), rs(b1, s)))
                b0 += l0
                b1 += l1
            emit((rs(b0, s), rs(b1, s)))
        else:
            for _ in range(khi - klo):
                emit(tuple(rs(num, s) for num in base))
                for i in range(d):
                    base[i] += last[i]
            emit(tuple(rs(num, s) for num in base))
    return out
