"""Tiling verification: constant-multiplicity certificates, general position,
and the connectivity-gated pipelines.

Exact certification works on the 2D torus obtained from a common period
lattice: the translate boundaries are arranged exactly, and the half-open
translate count is evaluated at a representative of every face.  Constancy at
those representatives forces constancy on all of R^2 because the count is
piecewise constant with breakpoints only on the arranged segments and is
periodic modulo the lattice.  Everything else falls back to seeded sampling,
which is reported as statistical evidence, never as a certificate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import InputSegment, TorusArrangement, supporting_lines
from .enumerator import EnumeratorContext
from .errors import InputError, ModeUnavailable
from .lattice import (
    Coset,
    Lattice,
    QuasiPeriodicSet,
    common_period,
    list_coset_points,
)
from .linalg import as_vec
from .polytope import Polytope, ProbeDirection, find_probe_direction
from .scalar import QuadraticSurd, Scalar, SymbolicGenerator, to_scalar


# -- modes -------------------------------------------------------------------


@dataclass(frozen=True)
class ExactTorus2D:
    """Exact certification over the torus of a common period lattice (d = 2)."""


@dataclass(frozen=True)
class Sampled:
    """Seeded uniform sampling; statistical evidence only."""

    sample_count: int = 4096
    seed: int = 0
    region: tuple | None = None  # (lo, hi) box; defaults to a fundamental domain


# -- results -----------------------------------------------------------------


@dataclass
class TilingCertificate:
    m: int
    mode: str  # "exact-torus" | "sampled"
    certifying: bool
    evidence: dict
    period: Lattice | None = None


@dataclass
class Discrepancy:
    observed: dict  # value -> witness point
    mode: str

    @property
    def values(self):
        return sorted(self.observed)

    @property
    def witness(self):
        return self.observed[self.values[-1]]


@dataclass
class ConnectivityVerdict:
    status: str  # "connected" | "disconnected" | "inconclusive"
    reason: str | None = None
    witness_lines: list = field(default_factory=list)
    witness_segments: list = field(default_factory=list)

    @property
    def connected(self):
        return self.status == "connected"


@dataclass
class PipelineOutcome:
    ok: bool
    m: int | None = None
    stage: str | None = None
    reason: str | None = None
    connectivity: ConnectivityVerdict | None = None
    verification: object | None = None


# -- shared machinery ---------------------------------------------------------


def _scalars_of(polytope: Polytope, q: QuasiPeriodicSet):
    for n, c in polytope.facets:
        yield from n
        yield c
    if polytope.vertices:
        for v in polytope.vertices:
            yield from v
    for coset in q.cosets:
        yield from coset.translation
        for col in coset.lattice.cols:
            yield from col


def _single_field(scalars) -> bool:
    surds = set()
    for s in scalars:
        for g in s.coeffs:
            if isinstance(g, SymbolicGenerator):
                return False
            if isinstance(g, QuadraticSurd):
                surds.add(g.radicand)
    return len(surds) <= 1


def translate_segments(polytope: Polytope, q: QuasiPeriodicSet,
                       period: Lattice) -> list[InputSegment]:
    """Edges of every translate P + l meeting the closed fundamental domain,
    tagged with the index of the coset that contributed l."""
    corners = [period.point(bits) for bits in itertools.product((0, 1), repeat=2)]
    dlo = tuple(min(c[i] for c in corners) for i in range(2))
    dhi = tuple(max(c[i] for c in corners) for i in range(2))
    plo, phi = polytope.bounding_box()
    e = [as_vec((1, 0)), as_vec((0, 1))]
    segs = []
    edges = polytope.edges_2d()
    for gi, coset in enumerate(q.cosets):
        cons = []
        for i in range(2):
            cons.append((e[i], dhi[i] - plo[i], False))
            cons.append((tuple(-x for x in e[i]), -(dlo[i] - phi[i]), False))
        box = [
            (dlo[0] - phi[0], dlo[1] - phi[1]), (dhi[0] - plo[0], dhi[1] - plo[1]),
            (dlo[0] - phi[0], dhi[1] - plo[1]), (dhi[0] - plo[0], dlo[1] - phi[1]),
        ]
        for lam in list_coset_points(coset, cons, box):
            for p, qq in edges:
                segs.append(InputSegment(
                    (p[0] + lam[0], p[1] + lam[1]),
                    (qq[0] + lam[0], qq[1] + lam[1]), frozenset((gi,))))
    return segs


def build_torus_arrangement(polytope: Polytope, q: QuasiPeriodicSet):
    """(arrangement, period) for exact 2D work; raises ModeUnavailable."""
    if polytope.dim != 2:
        raise ModeUnavailable("exact torus certification requires d = 2")
    period = common_period(q)
    if period is None:
        raise ModeUnavailable("translation set has no computable common period lattice")
    if not _single_field(_scalars_of(polytope, q)):
        raise ModeUnavailable(
            "exact mode requires all coordinates in one quadratic field"
        )
    arr = TorusArrangement(period, translate_segments(polytope, q, period))
    return arr, period


def _sample_points(q: QuasiPeriodicSet | None, sampled: Sampled, dim: int):
    rng = random.Random(sampled.seed)
    denom = 1 << 64
    if sampled.region is not None:
        lo = as_vec(sampled.region[0])
        hi = as_vec(sampled.region[1])
        for _ in range(sampled.sample_count):
            yield tuple(
                lo[i] + (hi[i] - lo[i]) * Fraction(rng.getrandbits(64), denom)
                for i in range(dim)
            )
        return
    if q is None:
        raise ModeUnavailable("sampled mode needs a region or a common period")
    period = common_period(q)
    if period is None:
        raise ModeUnavailable(
            "sampled mode needs an explicit region when no common period exists"
        )
    for _ in range(sampled.sample_count):
        coords = [Fraction(rng.getrandbits(64), denom) for _ in range(dim)]
        yield period.point(coords)


# -- verification -------------------------------------------------------------


def verify_constant_multiplicity(polytope: Polytope, probe: ProbeDirection | None,
                                 q: QuasiPeriodicSet, mode=None):
    """Certify that the half-open translate count is one constant m everywhere.

    ExactTorus2D evaluates every vertex, edge midpoint, and cell representative
    of the exact boundary arrangement on the torus; Sampled evaluates seeded
    points and cannot certify.
    """
    if probe is None:
        probe = find_probe_direction(polytope)
    if mode is None:
        mode = _auto_mode(polytope, q)
    ctx = EnumeratorContext(polytope, probe, q)
    if isinstance(mode, ExactTorus2D):
        arr, period = build_torus_arrangement(polytope, q)
        verts, edge_mids, cells = arr.face_points()
        observed = {}
        for p in itertools.chain(verts, edge_mids, cells):
            val = ctx.count_half_open(p)
            if val not in observed:
                observed[val] = p
        if len(observed) == 1:
            m = next(iter(observed))
            return TilingCertificate(
                m, "exact-torus", True,
                {
                    "segments": len(arr.segments),
                    "vertices": len(verts),
                    "edge_midpoints": len(edge_mids),
                    "cells": arr.cell_count,
                    "evaluations": len(verts) + len(edge_mids) + len(cells),
                },
                period,
            )
        return Discrepancy(observed, "exact-torus")
    if isinstance(mode, Sampled):
        observed = {}
        count = 0
        for p in _sample_points(q, mode, q.dim):
            val = ctx.count_half_open(p)
            count += 1
            if val not in observed:
                observed[val] = p
        if len(observed) == 1:
            m = next(iter(observed))
            return TilingCertificate(
                m, "sampled", False,
                {"samples": count, "seed": mode.seed}, None,
            )
        return Discrepancy(observed, "sampled")
    raise InputError(f"unknown verification mode {mode!r}")


def verify_generic_multiplicity(polytope: Polytope, probe: ProbeDirection | None,
                                q: QuasiPeriodicSet, mode=None):
    """Closed-count version, evaluated only at generic (cell-interior) points."""
    if probe is None:
        probe = find_probe_direction(polytope)
    if mode is None:
        mode = _auto_mode(polytope, q)
    ctx = EnumeratorContext(polytope, probe, q)
    if isinstance(mode, ExactTorus2D):
        arr, period = build_torus_arrangement(polytope, q)
        _, _, cells = arr.face_points()
        observed = {}
        for p in cells:
            val = ctx.count_closed(p)
            if val not in observed:
                observed[val] = p
        if len(observed) == 1:
            m = next(iter(observed))
            return TilingCertificate(
                m, "exact-torus", True,
                {"segments": len(arr.segments), "cells": arr.cell_count,
                 "evaluations": len(cells)},
                period,
            )
        return Discrepancy(observed, "exact-torus")
    if isinstance(mode, Sampled):
        observed = {}
        used = 0
        for p in _sample_points(q, mode, q.dim):
            if ctx.count_closed(p) != ctx.count_interior(p):
                continue  # p lies on a translated boundary: not generic
            used += 1
            val = ctx.count_closed(p)
            if val not in observed:
                observed[val] = p
        if not observed:
            raise ModeUnavailable("no generic sample points found")
        if len(observed) == 1:
            m = next(iter(observed))
            return TilingCertificate(
                m, "sampled", False,
                {"samples": used, "seed": mode.seed}, None,
            )
        return Discrepancy(observed, "sampled")
    raise InputError(f"unknown verification mode {mode!r}")


def _auto_mode(polytope: Polytope, q: QuasiPeriodicSet):
    try:
        if polytope.dim == 2 and common_period(q) is not None \
                and _single_field(_scalars_of(polytope, q)):
            return ExactTorus2D()
    except Exception:
        pass
    return Sampled()


# -- general position ----------------------------------------------------------


def general_position_check(polytope: Polytope, q: QuasiPeriodicSet,
                           i: int) -> ConnectivityVerdict:
    """Is R^d minus H_i path-connected, where H_i is the union over j != i of
    the pairwise intersections of the translated boundaries?

    Exact verdicts need d = 2 and a common period; the check runs on the
    torus cell graph with 1-cells inside H_i removed, and the complement in
    the plane is connected iff that graph is connected AND its traversable
    boundary-gluing cycles generate the full period group.
    """
    if not 0 <= i < len(q.cosets):
        raise InputError(f"coset index {i} out of range")
    if len(q.cosets) == 1:
        return ConnectivityVerdict("connected", reason="single coset: H_i is empty")
    try:
        arr, _ = build_torus_arrangement(polytope, q)
    except ModeUnavailable as exc:
        return ConnectivityVerdict("inconclusive", reason=str(exc))
    connected, witness = arr.connectivity(
        lambda groups: i in groups and any(j != i for j in groups)
    )
    if connected:
        return ConnectivityVerdict("connected")
    return ConnectivityVerdict(
        "disconnected",
        reason=f"H_{i} separates the plane",
        witness_lines=supporting_lines(witness),
        witness_segments=[w.geom for w in witness],
    )


def split_connectivity(polytope: Polytope, q: QuasiPeriodicSet,
                       s1, s2) -> ConnectivityVerdict:
    """Connectivity of the complement of (bd P + Q[s1]) cap (bd P + Q[s2])."""
    s1, s2 = set(s1), set(s2)
    if not s2 or not s1:
        return ConnectivityVerdict("connected", reason="one side empty: H is empty")
    try:
        arr, _ = build_torus_arrangement(polytope, q)
    except ModeUnavailable as exc:
        return ConnectivityVerdict("inconclusive", reason=str(exc))
    connected, witness = arr.connectivity(
        lambda groups: bool(groups & s1) and bool(groups & s2)
    )
    if connected:
        return ConnectivityVerdict("connected")
    return ConnectivityVerdict(
        "disconnected",
        reason="the split intersection set separates the plane",
        witness_lines=supporting_lines(witness),
        witness_segments=[w.geom for w in witness],
    )


# -- pipelines -------------------------------------------------------------------


def theorem_1_1_pipeline(polytope: Polytope, q: QuasiPeriodicSet, i: int,
                         probe: ProbeDirection | None = None,
                         mode=None) -> PipelineOutcome:
    """General-position gate, then constant-multiplicity verification of the
    single coset i."""
    verdict = general_position_check(polytope, q, i)
    if verdict.status != "connected":
        return PipelineOutcome(
            ok=False, stage="general-position",
            reason=verdict.reason or verdict.status, connectivity=verdict,
        )
    alone = QuasiPeriodicSet((q.cosets[i],))
    result = verify_constant_multiplicity(polytope, probe, alone, mode)
    if isinstance(result, TilingCertificate):
        return PipelineOutcome(ok=True, m=result.m, connectivity=verdict,
                               verification=result)
    return PipelineOutcome(
        ok=False, stage="verification",
        reason=f"translate count is not constant; observed {result.values}",
        connectivity=verdict, verification=result,
    )


def split_check(polytope: Polytope, q: QuasiPeriodicSet, s1, s2,
                probe: ProbeDirection | None = None,
                mode=None) -> PipelineOutcome:
    """Lemma-style split: if the overlap of the two groups' translated
    boundaries does not separate the plane, the first group tiles on its own."""
    s1, s2 = sorted(set(s1)), sorted(set(s2))
    if not s1:
        raise InputError("split_check needs a nonempty first group")
    if set(s1) & set(s2):
        raise InputError("split groups must be disjoint")
    if set(s1) | set(s2) != set(range(len(q.cosets))):
        raise InputError("split groups must partition the coset indices")
    verdict = split_connectivity(polytope, q, s1, s2)
    if verdict.status != "connected":
        return PipelineOutcome(
            ok=False, stage="general-position",
            reason=verdict.reason or verdict.status, connectivity=verdict,
        )
    part = QuasiPeriodicSet(tuple(q.cosets[i] for i in s1))
    result = verify_constant_multiplicity(polytope, probe, part, mode)
    if isinstance(result, TilingCertificate):
        return PipelineOutcome(ok=True, m=result.m, connectivity=verdict,
                               verification=result)
    return PipelineOutcome(
        ok=False, stage="verification",
        reason=f"translate count is not constant; observed {result.values}",
        connectivity=verdict, verification=result,
    )
