"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines.  All equality assertions are exact; the only tolerances are the
stated wall-clock bounds and the Weyl-statistic bound.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from multitile.enumerator import EnumeratorContext, coverage_count
from multitile.lattice import (
    Coset,
    Lattice,
    QuasiPeriodicSet,
    WindowMultiset,
    enumerate_in_polytope,
)
from multitile.polytope import (
    HalfOpenPolytope,
    ProbeDirection,
    contains_half_open,
    find_probe_direction,
    from_vertices,
)
from multitile.scalar import scalar_sqrt, to_scalar
from multitile.verifier import (
    Discrepancy,
    ExactTorus2D,
    Sampled,
    TilingCertificate,
    build_torus_arrangement,
    general_position_check,
    verify_constant_multiplicity,
)
from multitile.weights import CosetFamily, WeightSolution, synthesize
from multitile.weyl import weyl_search

from conftest import naive_points_in, random_fraction

H = Fraction(1, 2)
R2 = scalar_sqrt(2)


def report(cid, message):
    print(f"ACCEPTANCE {cid}: PASS — {message}")


def test_criterion_1_example51_positive(rect51, q51):
    t0 = time.perf_counter()
    res = verify_constant_multiplicity(rect51, None, q51, ExactTorus2D())
    elapsed = time.perf_counter() - t0
    assert isinstance(res, TilingCertificate)
    assert res.m == 1
    assert res.certifying and res.mode == "exact-torus"
    assert elapsed < 10
    report(1, f"exact-torus certificate m=1 in {elapsed:.2f}s "
              f"({res.evidence['evaluations']} face evaluations)")


def test_criterion_2_example51_negatives(rect51, q51):
    probe = find_probe_direction(rect51)
    for i in (0, 1):
        alone = QuasiPeriodicSet((q51.cosets[i],))
        res = verify_constant_multiplicity(rect51, probe, alone, ExactTorus2D())
        assert isinstance(res, Discrepancy)
        assert res.values == [0, 1]
        # confirm each witness value with the direct coverage-count oracle
        pts = []
        t = q51.cosets[i].translation
        for m in range(-3, 4):
            for n in range(-3, 4):
                pts.append(((t[0] + m, t[1] + n), 1))
        window = WindowMultiset(tuple(pts))
        for value, witness in res.observed.items():
            assert coverage_count(rect51, probe, window, witness) == value
    report(2, "single-coset verification yields Discrepancy with observed "
              "values exactly {0,1}, confirmed by the coverage oracle")


def _brute_separating_lines(rect, q, i, steps=40):
    """Independent oracle: the supporting lines of 1-dimensional overlap
    between boundary-of-P + coset_i and the other cosets' boundaries,
    detected by dense point sampling along each candidate translate edge."""
    edge_sets = []
    for coset in q.cosets:
        pieces = []
        for m in range(-2, 3):
            for n in range(-2, 3):
                lam = (coset.translation[0] + m, coset.translation[1] + n)
                for p, qq in rect.edges_2d():
                    pieces.append(((p[0] + lam[0], p[1] + lam[1]),
                                   (qq[0] + lam[0], qq[1] + lam[1])))
        edge_sets.append(pieces)

    def on_segment(pt, seg):
        (ax, ay), (bx, by) = seg
        cross = (bx - ax) * (pt[1] - ay) - (by - ay) * (pt[0] - ax)
        if cross.sign() != 0:
            return False
        lox, hix = min(ax, bx), max(ax, bx)
        loy, hiy = min(ay, by), max(ay, by)
        return lox <= pt[0] <= hix and loy <= pt[1] <= hiy

    lines = set()
    others = [s for j, so in enumerate(edge_sets) if j != i for s in so]
    for seg in edge_sets[i]:
        (ax, ay), (bx, by) = seg
        overlap = 0
        for k in range(1, steps):
            t = Fraction(k, steps)
            pt = (ax + (bx - ax) * t, ay + (by - ay) * t)
            if any(on_segment(pt, o) for o in others):
                overlap += 1
        if overlap == steps - 1:  # the whole open edge lies in the overlap
            a, b = by - ay, ax - bx
            c = a * ax + b * ay
            lead = a if a.sign() != 0 else b
            lines.add((a / lead, b / lead, c / lead))
    return lines


def test_criterion_3_general_position_disconnected(rect51, q51):
    for i in (0, 1):
        verdict = general_position_check(rect51, q51, i)
        assert verdict.status == "disconnected"
        got = set(verdict.witness_lines)
        oracle = _brute_separating_lines(rect51, q51, i)
        # every witness line is a true overlap line per the oracle (modulo
        # the torus period, the oracle window covers offsets 0, 1/2, 1)
        assert got <= oracle
        # and the witness describes the horizontal half-period family
        assert all(a == to_scalar(0) and b == to_scalar(1) for a, b, _ in got)
        assert {c.rat % 1 for _, _, c in got} == {Fraction(0), H}
    report(3, "general position check returns Disconnected for both cosets; "
              "witness = horizontal lines spaced 1/2 (oracle-confirmed; "
              "see decisions ledger on the transposed value in the source text)")


@pytest.mark.xfail(
    strict=True,
    reason="stated witness 'vertical lines x in Z' contradicts the fixture's "
           "own geometry: the boundary overlap is the horizontal half-period "
           "family; see the decisions ledger",
)
def test_criterion_3_witness_as_literally_stated(rect51, q51):
    verdict = general_position_check(rect51, q51, 0)
    assert verdict.status == "disconnected"
    got = set(verdict.witness_lines)
    # vertical lines x in Z on the torus: x = 0 and x = 1, normal (1, 0)
    assert all(a == to_scalar(1) and b == to_scalar(0) for a, b, _ in got)
    assert {c.rat % 1 for _, _, c in got} == {Fraction(0)}


def test_criterion_4_refinement_pipeline(rect51, z2):
    from multitile.weyl import theorem_1_4_pipeline
    res = theorem_1_4_pipeline(rect51, None, z2, (0, 0), (R2 / 2, H))
    assert res.n == 2
    assert res.candidate.lattice.same_lattice(Lattice([[H, 0], [0, H]]))
    assert isinstance(res.verification, TilingCertificate)
    assert res.verification.m == 2 and res.verification.certifying
    report(4, "N=2, candidate (1/2)Z^2, certified m=2")


def test_criterion_5_synthesis_rect_pair(rect51, z2):
    fam = CosetFamily(z2, ((0, 0), (0, H)))
    res = synthesize(rect51, None, fam, ExactTorus2D())
    assert isinstance(res, WeightSolution)
    assert res.gprime == (1, 1) and res.m == 1
    # the weighted-count identity at every arrangement face representative
    arr, _ = build_torus_arrangement(rect51, fam.quasi_periodic())
    verts, mids, cells = arr.face_points()
    probe = find_probe_direction(rect51)
    base = EnumeratorContext(rect51, probe, QuasiPeriodicSet((Coset(z2, (0, 0)),)))
    for p in itertools.chain(verts, mids, cells):
        total = sum(
            g * base.count_half_open((p[0] - a[0], p[1] - a[1]))
            for g, a in zip(res.gprime, fam.offsets)
        )
        assert total == res.m
    count = len(verts) + len(mids) + len(cells)
    report(5, f"g'=(1,1), m=1; weighted-count identity holds at all "
              f"{count} face representatives")


def test_criterion_6_unit_cubes():
    for d in (1, 2, 3):
        cube = from_vertices(list(itertools.product((0, 1), repeat=d)))
        fam = CosetFamily(Lattice.standard(d), (tuple([0] * d),))
        mode = ExactTorus2D() if d == 2 else Sampled(10000 if d == 3 else 2000, 23)
        res = synthesize(cube, None, fam, mode)
        assert isinstance(res, WeightSolution)
        assert res.gprime == (1,) and res.m == 1
        if d == 3:
            # 10^4 seeded points, zero violations of the weighted identity
            probe = find_probe_direction(cube)
            ctx = EnumeratorContext(
                cube, probe, QuasiPeriodicSet((Coset(Lattice.standard(3), (0, 0, 0)),)))
            rng = random.Random(40)
            denom = 1 << 64
            for _ in range(10000):
                v = tuple(Fraction(rng.getrandbits(64), denom) for _ in range(3))
                assert ctx.count_half_open(v) == 1
    report(6, "unit cube with Z^d for d in {1,2,3}: g'=(1), m=1 "
              "(exact for d=2; 10^4 seeded samples, zero violations, for d=3)")


def test_criterion_7_weyl_search():
    t0 = time.perf_counter()
    j = weyl_search((R2 / 2,), Fraction(1, 20), 1000)
    elapsed = time.perf_counter() - t0
    assert j == 8
    # exhaustive re-check that all smaller j fail
    for jj in range(j):
        mult = 2 * jj + 1
        x = R2 / 2 * mult
        f = x.floor()
        dist = min(x - f, to_scalar(f + 1) - x)
        assert (dist - Fraction(1, 20)).sign() >= 0
    assert elapsed < 1
    report(7, f"j=8 found in {elapsed*1000:.0f}ms; minimality re-checked")


def test_criterion_8_property_suite(unit_square, z2):
    rng = random.Random(808)
    probe = ProbeDirection((1, 1))

    # (a) translate-count identity on 1000 randomized windows
    for _ in range(1000):
        pts = tuple(
            ((random_fraction(rng, -2, 2), random_fraction(rng, -2, 2)),
             rng.randint(1, 3))
            for _ in range(rng.randint(1, 6))
        )
        win = WindowMultiset(pts)
        v = (random_fraction(rng, -2, 2), random_fraction(rng, -2, 2))
        ctx = EnumeratorContext(unit_square, probe, win)
        assert ctx.count_half_open(v) == coverage_count(unit_square, probe, win, v)

    # (b) periodicity on 1000 randomized lattice instances
    checks = 0
    while checks < 1000:
        den = rng.randint(1, 3)
        cols = [[Fraction(rng.randint(1, 3), den), Fraction(0)],
                [Fraction(rng.randint(-1, 1), den), Fraction(rng.randint(1, 3), den)]]
        lat = Lattice(cols)
        ctx = EnumeratorContext(
            unit_square, probe, QuasiPeriodicSet((Coset(lat, (0, 0)),)))
        v = (random_fraction(rng, -2, 2, 8), random_fraction(rng, -2, 2, 8))
        lam = lat.point((rng.randint(-2, 2), rng.randint(-2, 2)))
        assert ctx.count_half_open((v[0] + lam[0], v[1] + lam[1])) == \
            ctx.count_half_open(v)
        checks += 1

    # (c) half-open partition: every point in exactly one translate of P^h
    hop = HalfOpenPolytope(unit_square, probe)
    for _ in range(1000):
        v = (random_fraction(rng, -3, 3, 16), random_fraction(rng, -3, 3, 16))
        hits = 0
        vx = v[0].floor() if hasattr(v[0], "floor") else int(v[0])
        base = (to_scalar(v[0]).floor(), to_scalar(v[1]).floor())
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                lam = (base[0] + dx, base[1] + dy)
                w = (v[0] - lam[0], v[1] - lam[1])
                if contains_half_open(hop, w):
                    hits += 1
        assert hits == 1

    # (d) enumeration equals the naive box-scan oracle on 500 instances
    trials = 0
    while trials < 500:
        d = rng.choice((1, 1, 2, 2, 2, 3))
        cols = [[Fraction(0)] * d for _ in range(d)]
        for j in range(d):
            diag = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            cols[j][j] = diag if rng.random() < 0.8 else -diag
            for i in range(d):
                if i != j and rng.random() < 0.4:
                    cols[j][i] = Fraction(rng.randint(-1, 1), rng.randint(1, 3))
        try:
            lat = Lattice(cols)
        except Exception:
            continue
        t = tuple(random_fraction(rng, -2, 2, 4) for _ in range(d))
        lo = [random_fraction(rng, -3, 1, 3) for _ in range(d)]
        side = [abs(random_fraction(rng, 1, 3, 2)) + H for _ in range(d)]
        corners = [tuple(lo[i] + (side[i] if bits >> i & 1 else 0)
                         for i in range(d)) for bits in range(1 << d)]
        box = from_vertices(corners)
        pr = find_probe_direction(box) if rng.random() < 0.5 else None
        coset = Coset(lat, t)
        got = sorted(p for p, _ in enumerate_in_polytope(coset, box, pr).points)
        assert got == sorted(naive_points_in(box, coset, pr)), f"trial {trials}"
        trials += 1

    report(8, "identity x1000, periodicity x1000, half-open partition x1000, "
              "enumeration vs naive scan x500 — all exact")


def test_criterion_9_performance_floor():
    # (a) >= 10^6 points of a random rational 3D lattice in a box, < 5 s
    rng = random.Random(99)
    cols = [[Fraction(1, 2), 0, 0],
            [Fraction(rng.randint(-1, 1), 4), Fraction(1, 2), 0],
            [Fraction(rng.randint(-1, 1), 4), Fraction(rng.randint(-1, 1), 4),
             Fraction(1, 2)]]
    lat = Lattice(cols)  # |det| = 1/8: 8 points per unit volume
    side = 51
    box = from_vertices([(x, y, z) for x in (0, side) for y in (0, side)
                         for z in (0, side)])
    t0 = time.perf_counter()
    w = enumerate_in_polytope(Coset(lat, (Fraction(1, 3), Fraction(1, 7),
                                          Fraction(1, 11))), box)
    t_enum = time.perf_counter() - t0
    assert len(w.points) >= 10**6
    assert t_enum < 5

    # (b) exact 2D torus certification with <= 200 segments, < 30 s
    z2 = Lattice.standard(2)
    rect = from_vertices([(0, 0), (1, 0), (1, H), (0, H)])
    offsets = [(Fraction(i, 5), Fraction(j, 4)) for i in range(5) for j in range(4)]
    q = QuasiPeriodicSet(tuple(Coset(z2, o) for o in offsets))
    arr, _ = build_torus_arrangement(rect, q)
    assert len(arr.segments) <= 200
    t0 = time.perf_counter()
    res = verify_constant_multiplicity(rect, None, q, ExactTorus2D())
    t_cert = time.perf_counter() - t0
    assert isinstance(res, TilingCertificate) and res.m == 10
    assert t_cert < 30
    report(9, f"{len(w.points)} lattice points in {t_enum:.2f}s; "
              f"{len(arr.segments)}-segment torus certified m=10 in {t_cert:.2f}s")
