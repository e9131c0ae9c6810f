"""Nonnegative integer tiling weights over lattice cosets.

Given a polytope, a lattice L, and offsets a_1..a_n, the vector of translate
counts v -> (count(v - a_1), ..., count(v - a_n)) takes finitely many values;
the differences of realized value vectors span a subspace V of Q^n, and any
nonnegative nonzero integer vector in the orthogonal complement of V is a
weight vector making the weighted coset union an m-tiling.  The weight vector
is extracted deterministically with an exact Bland-rule simplex over the
canonicalized complement basis.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .enumerator import EnumeratorContext
from .errors import InputError, ModeUnavailable
from .lattice import Coset, Lattice, QuasiPeriodicSet, common_period
from .linalg import Vec, as_vec, orthogonal_complement, rational_rank, rref
from .linprog import solve_standard_lp
from .polytope import Polytope, ProbeDirection, find_probe_direction
from .scalar import to_scalar
from .verifier import ExactTorus2D, Sampled, build_torus_arrangement, _auto_mode

_BATCH = 64
_STABLE_BATCHES = 5
_SAMPLED_VERIFY_POINTS = 256


@dataclass(frozen=True)
class CosetFamily:
    """One lattice with finitely many offsets; the candidate coset union."""

    lattice: Lattice
    offsets: tuple[Vec, ...]

    def __post_init__(self):
        offs = tuple(as_vec(o) for o in self.offsets)
        if not offs:
            raise InputError("coset family needs at least one offset")
        if any(len(o) != self.lattice.dim for o in offs):
            raise InputError("offset dimension mismatch")
        for a, b in itertools.combinations(offs, 2):
            diff = tuple(x - y for x, y in zip(a, b))
            if self.lattice.contains_point(diff):
                raise InputError("offsets must be pairwise distinct modulo the lattice")
        object.__setattr__(self, "offsets", offs)

    @property
    def n(self) -> int:
        return len(self.offsets)

    def quasi_periodic(self, weights=None) -> QuasiPeriodicSet:
        weights = weights or [1] * self.n
        return QuasiPeriodicSet(tuple(
            Coset(self.lattice, off, w) for off, w in zip(self.offsets, weights) if w
        ))


@dataclass
class WeightSolution:
    gprime: tuple[int, ...]
    m: int
    evidence: dict


@dataclass
class SynthesisFailure:
    stage: str
    reason: str


class _ValueVectors:
    """Evaluates the per-offset translate-count vector at a point."""

    def __init__(self, polytope: Polytope, probe: ProbeDirection, family: CosetFamily):
        self.contexts = [
            EnumeratorContext(polytope, probe,
                              QuasiPeriodicSet((Coset(family.lattice, (to_scalar(0),) * family.lattice.dim),)))
        ]
        self.offsets = family.offsets
        self.base = self.contexts[0]

    def at(self, v) -> tuple[int, ...]:
        v = as_vec(v)
        return tuple(
            self.base.count_half_open(tuple(x - a for x, a in zip(v, off)))
            for off in self.offsets
        )


def _exact_face_points(polytope: Polytope, family: CosetFamily):
    q = family.quasi_periodic()
    arr, _ = build_torus_arrangement(polytope, q)
    verts, mids, cells = arr.face_points()
    return list(itertools.chain(verts, mids, cells))


def _family_samples(family: CosetFamily, seed: int):
    rng = random.Random(seed)
    denom = 1 << 64
    lat = family.lattice
    while True:
        coords = [Fraction(rng.getrandbits(64), denom) for _ in range(lat.dim)]
        yield lat.point(coords)


def collect_difference_vectors(polytope: Polytope, probe: ProbeDirection | None,
                               family: CosetFamily, mode=None):
    """Generating set of the difference space V (integer vectors in Z^n).

    Exact mode enumerates every realized value vector over the torus faces and
    emits all pairwise differences; sampled mode draws seeded point pairs in
    batches until the rational rank stabilizes.
    """
    if probe is None:
        probe = find_probe_direction(polytope)
    if mode is None:
        mode = _auto_mode(polytope, family.quasi_periodic())
    values = _ValueVectors(polytope, probe, family)
    if isinstance(mode, ExactTorus2D):
        realized = []
        seen = set()
        for p in _exact_face_points(polytope, family):
            vec = values.at(p)
            if vec not in seen:
                seen.add(vec)
                realized.append(vec)
        diffs = []
        for a, b in itertools.combinations(realized, 2):
            diffs.append(tuple(x - y for x, y in zip(a, b)))
        return diffs
    if isinstance(mode, Sampled):
        gen = _family_samples(family, mode.seed)
        diffs = []
        rank = 0
        stable = 0
        while stable < _STABLE_BATCHES:
            for _ in range(_BATCH):
                v, w = next(gen), next(gen)
                dv = values.at(v)
                dw = values.at(w)
                d = tuple(x - y for x, y in zip(dv, dw))
                if any(d):
                    diffs.append(d)
            new_rank = rational_rank(diffs) if diffs else 0
            if new_rank == rank:
                stable += 1
            else:
                rank = new_rank
                stable = 0
        return diffs
    raise InputError(f"unknown mode {mode!r}")


def rational_orthogonal_complement(vectors, n: int):
    """Canonical rational basis (RREF rows, pivot-ordered) of span(vectors)^perp."""
    return orthogonal_complement([list(v) for v in vectors], n)


def find_nonnegative_integer_vector(perp_basis, n: int | None = None):
    """A nonnegative nonzero integer vector in span(perp_basis), or None.

    Solves {x in span, sum x = 1, x >= 0} with exact Bland-rule simplex, then
    clears denominators and divides by the gcd; deterministic.
    """
    if n is None:
        if not perp_basis:
            raise InputError("need the ambient dimension for an empty basis")
        n = len(perp_basis[0])
    # x in span(perp_basis)  <=>  x orthogonal to the complement of the span.
    v_rows = orthogonal_complement([list(r) for r in perp_basis], n)
    a_eq = [list(map(Fraction, row)) for row in v_rows]
    b_eq = [Fraction(0)] * len(a_eq)
    a_eq.append([Fraction(1)] * n)
    b_eq.append(Fraction(1))
    res = solve_standard_lp([Fraction(0)] * n, a_eq, b_eq)
    if res.status != "optimal":
        return None
    x = [xi.rat for xi in res.x]
    denom = 1
    for xi in x:
        denom = denom * xi.denominator // math.gcd(denom, xi.denominator)
    ints = [int(xi * denom) for xi in x]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints)


def synthesize(polytope: Polytope, probe: ProbeDirection | None,
               family: CosetFamily, mode=None):
    """Full Theorem-4.2-style construction: difference space, orthogonal
    complement, nonnegative integer weights, then a global identity check."""
    if probe is None:
        probe = find_probe_direction(polytope)
    if mode is None:
        mode = _auto_mode(polytope, family.quasi_periodic())
    diffs = collect_difference_vectors(polytope, probe, family, mode)
    perp = rational_orthogonal_complement(diffs, family.n)
    gprime = find_nonnegative_integer_vector(perp, family.n)
    if gprime is None:
        return SynthesisFailure(
            "nonnegative-vector",
            "the orthogonal complement of the difference space meets the "
            "nonnegative orthant only at zero",
        )
    values = _ValueVectors(polytope, probe, family)
    if isinstance(mode, ExactTorus2D):
        check_points = _exact_face_points(polytope, family)
    else:
        gen = _family_samples(family, mode.seed + 1)
        check_points = [next(gen) for _ in range(_SAMPLED_VERIFY_POINTS)]
    m = None
    for p in check_points:
        val = sum(g * c for g, c in zip(gprime, values.at(p)))
        if m is None:
            m = val
        elif val != m:
            return SynthesisFailure(
                "verification",
                f"weighted count identity failed: {val} != {m} at a check point"
                + (" (sampling may have under-spanned the difference space)"
                   if isinstance(mode, Sampled) else ""),
            )
    if not m or m <= 0:
        return SynthesisFailure("verification", f"weighted count m = {m} is not positive")
    return WeightSolution(
        gprime, int(m),
        {
            "mode": "exact-torus" if isinstance(mode, ExactTorus2D) else "sampled",
            "difference_vectors": len(diffs),
            "check_points": len(check_points),
            "perp_dimension": len(perp),
        },
    )
