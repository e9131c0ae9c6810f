"""Command-line interface.

Subcommands: verify, genpos, synthesize, refine, weyl, enumerate, render,
demo-example-5-1.  JSON reports go to stdout, diagnostics to stderr.  Exit
codes: 0 verified/solved, 1 discrepancy or disproof, 2 inconclusive,
3 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .errors import (
    InputError,
    ModeUnavailable,
    MultitileError,
    PrecisionUnreachable,
    SignIndeterminate,
)
from .lattice import Coset, QuasiPeriodicSet, WindowMultiset, enumerate_in_polytope
from .polytope import find_probe_direction
from .problem import (
    load_problem,
    parse_scalar_literal,
    point_to_json,
    report_json,
    scalar_to_json,
)
from .render import render_tiling
from .verifier import (
    Discrepancy,
    ExactTorus2D,
    Sampled,
    TilingCertificate,
    general_position_check,
    split_check,
    theorem_1_1_pipeline,
    verify_constant_multiplicity,
    verify_generic_multiplicity,
)
from .weights import CosetFamily, SynthesisFailure, WeightSolution, synthesize
from .weyl import equidistribution_statistic, theorem_1_4_pipeline, weyl_search

EXIT_OK = 0
EXIT_DISPROOF = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="multitile",
        description="Exact verification of multiple tilings by translates "
                    "of a convex polytope over quasi-periodic translation sets.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, problem=True):
        if problem:
            p.add_argument("--problem", required=True, help="problem JSON file")
        p.add_argument("--mode", choices=("exact", "sampled"), default=None)
        p.add_argument("--samples", type=int, default=4096)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="certify constant tiling multiplicity")
    add_common(p)
    p.add_argument("--generic", action="store_true",
                   help="closed counts at generic points instead of half-open")

    p = sub.add_parser("genpos", help="general-position (connectivity) check")
    p.add_argument("--problem", required=True)
    p.add_argument("--coset", type=int, default=0, help="coset index i")

    p = sub.add_parser("split", help="two-group split check")
    add_common(p)

    p = sub.add_parser("pipeline", help="general position gate, then verify one coset")
    add_common(p)
    p.add_argument("--coset", type=int, default=0)

    p = sub.add_parser("synthesize", help="nonnegative integer coset weights")
    add_common(p)

    p = sub.add_parser("refine", help="two-coset lattice refinement pipeline")
    add_common(p)

    p = sub.add_parser("weyl", help="odd-multiple near-integer search")
    p.add_argument("--problem", help="problem JSON with a weyl section")
    p.add_argument("--a", help="comma-separated scalar literals, e.g. 'sqrt:2/2'")
    p.add_argument("--eps", default="1/20")
    p.add_argument("--jmax", type=int, default=1000)
    p.add_argument("--stat", action="store_true",
                   help="also report the equidistribution statistic")
    p.add_argument("--frequency", default=None, help="comma-separated integers")
    p.add_argument("--M", type=int, default=10000)

    p = sub.add_parser("enumerate", help="list translation points inside the polytope")
    p.add_argument("--problem", required=True)
    p.add_argument("--coset", type=int, default=0)
    p.add_argument("--boundary", choices=("closed", "half-open"), default="half-open")

    p = sub.add_parser("render", help="SVG drawing of the translates")
    p.add_argument("--problem", required=True)
    p.add_argument("--out", required=True, help="output SVG path")

    p = sub.add_parser("demo-example-5-1", help="run the rectangle fixture end to end")
    p.add_argument("--out", default=None, help="optional SVG output path")
    return ap


def _pick_mode(args):
    if args.mode == "exact":
        return ExactTorus2D()
    if args.mode == "sampled":
        return Sampled(args.samples, args.seed)
    return None


def _certificate_payload(res):
    if isinstance(res, TilingCertificate):
        payload = {
            "result": "certificate",
            "m": res.m,
            "mode": res.mode,
            "certifying": res.certifying,
            "evidence": res.evidence,
        }
        if res.period is not None:
            payload["period_basis"] = [
                point_to_json(col) for col in res.period.cols
            ]
        return payload
    assert isinstance(res, Discrepancy)
    return {
        "result": "discrepancy",
        "mode": res.mode,
        "observed": [
            {"value": v, "witness": point_to_json(res.observed[v])}
            for v in res.values
        ],
    }


def _verdict_payload(verdict):
    payload = {"status": verdict.status}
    if verdict.reason:
        payload["reason"] = verdict.reason
    if verdict.witness_lines:
        payload["witness_lines"] = [
            {"a": scalar_to_json(a), "b": scalar_to_json(b), "c": scalar_to_json(c)}
            for a, b, c in verdict.witness_lines
        ]
    if verdict.witness_segments:
        payload["witness_segments"] = [
            [point_to_json(p), point_to_json(q)] for p, q in verdict.witness_segments
        ]
    return payload


def _emit(payload: dict) -> None:
    print(report_json(payload))


def _require(problem, attr, what):
    value = getattr(problem, attr)
    if value is None:
        raise InputError(f"problem file lacks the {what!r} section")
    return value


def _cmd_verify(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    translations = _require(problem, "translations", "translations")
    if isinstance(translations, WindowMultiset):
        raise InputError("verify expects coset translations; windows are for enumerate")
    fn = verify_generic_multiplicity if args.generic else verify_constant_multiplicity
    res = fn(polytope, problem.probe, translations, _pick_mode(args))
    _emit({"task": "verify", **_certificate_payload(res)})
    return EXIT_OK if isinstance(res, TilingCertificate) else EXIT_DISPROOF


def _cmd_genpos(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    translations = _require(problem, "translations", "translations")
    verdict = general_position_check(polytope, translations, args.coset)
    _emit({"task": "genpos", "coset": args.coset, **_verdict_payload(verdict)})
    if verdict.status == "connected":
        return EXIT_OK
    if verdict.status == "disconnected":
        return EXIT_DISPROOF
    return EXIT_INCONCLUSIVE


def _cmd_split(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    translations = _require(problem, "translations", "translations")
    spec = _require(problem, "split", "split")
    out = split_check(polytope, translations, spec["s1"], spec["s2"],
                      problem.probe, _pick_mode(args))
    payload = {"task": "split", "ok": out.ok}
    if out.ok:
        payload["m"] = out.m
    else:
        payload.update({"stage": out.stage, "reason": out.reason})
    if out.connectivity:
        payload["connectivity"] = _verdict_payload(out.connectivity)
    if out.verification is not None:
        payload["verification"] = _certificate_payload(out.verification)
    _emit(payload)
    if out.ok:
        return EXIT_OK
    if out.connectivity and out.connectivity.status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_DISPROOF


def _cmd_pipeline(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    translations = _require(problem, "translations", "translations")
    out = theorem_1_1_pipeline(polytope, translations, args.coset,
                               problem.probe, _pick_mode(args))
    payload = {"task": "pipeline", "coset": args.coset, "ok": out.ok}
    if out.ok:
        payload["m"] = out.m
    else:
        payload.update({"stage": out.stage, "reason": out.reason})
    if out.connectivity:
        payload["connectivity"] = _verdict_payload(out.connectivity)
    if out.verification is not None:
        payload["verification"] = _certificate_payload(out.verification)
    _emit(payload)
    if out.ok:
        return EXIT_OK
    if out.connectivity and out.connectivity.status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_DISPROOF


def _cmd_synthesize(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    fam = _require(problem, "family", "family")
    family = CosetFamily(fam["lattice"], tuple(fam["offsets"]))
    mode = _pick_mode(args)
    res = synthesize(polytope, problem.probe, family, mode)
    if isinstance(res, WeightSolution):
        _emit({
            "task": "synthesize",
            "result": "solution",
            "g_prime": list(res.gprime),
            "m": res.m,
            "evidence": res.evidence,
        })
        return EXIT_OK
    assert isinstance(res, SynthesisFailure)
    _emit({
        "task": "synthesize", "result": "failure",
        "stage": res.stage, "reason": res.reason,
    })
    sampled = isinstance(mode, Sampled) or (
        mode is None and not isinstance(_pick_mode_or_auto(problem), ExactTorus2D))
    return EXIT_INCONCLUSIVE if sampled else EXIT_DISPROOF


def _pick_mode_or_auto(problem):
    from .verifier import _auto_mode
    try:
        fam = problem.family
        qps = CosetFamily(fam["lattice"], tuple(fam["offsets"])).quasi_periodic()
        return _auto_mode(problem.polytope, qps)
    except Exception:
        return Sampled()


def _cmd_refine(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    spec = _require(problem, "refinement", "refinement")
    res = theorem_1_4_pipeline(polytope, problem.probe, spec["lattice"],
                               spec["t1"], spec["t2"], spec["weights"],
                               _pick_mode(args))
    payload = {
        "task": "refine",
        "N": res.n,
        "candidate": {
            "basis": [point_to_json(col) for col in res.candidate.lattice.cols],
            "translation": point_to_json(res.candidate.translation),
        },
        "irrational_rank": res.decomposition.irrational_rank,
        "verification": _certificate_payload(res.verification),
    }
    _emit(payload)
    return EXIT_OK if isinstance(res.verification, TilingCertificate) else EXIT_DISPROOF


def _cmd_weyl(args) -> int:
    if args.a:
        aprime = tuple(parse_scalar_literal(t) for t in args.a.split(","))
        eps = Fraction(args.eps)
        j_max = args.jmax
        frequency = tuple(int(t) for t in args.frequency.split(",")) \
            if args.frequency else ()
        m_sum = args.M
    elif args.problem:
        problem = load_problem(args.problem)
        spec = _require(problem, "weyl", "weyl")
        aprime, eps, j_max = spec["a"], spec["eps"], spec["j_max"]
        frequency, m_sum = spec["frequency"], spec["M"]
    else:
        raise InputError("weyl needs --a or --problem")
    j = weyl_search(aprime, eps, j_max)
    payload = {
        "task": "weyl",
        "eps": str(eps),
        "j_max": j_max,
        "j": j,
    }
    if args.stat or frequency:
        freq = frequency or (1,) * len(aprime)
        payload["equidistribution_statistic"] = equidistribution_statistic(
            aprime, freq, m_sum)
        payload["frequency"] = list(freq)
        payload["M"] = m_sum
    _emit(payload)
    return EXIT_OK if j is not None else EXIT_INCONCLUSIVE


def _cmd_enumerate(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    translations = _require(problem, "translations", "translations")
    probe = problem.probe or find_probe_direction(polytope)
    if isinstance(translations, WindowMultiset):
        raise InputError("enumerate expects coset translations, not a window")
    if not 0 <= args.coset < len(translations.cosets):
        raise InputError(f"coset index {args.coset} out of range")
    coset = translations.cosets[args.coset]
    window = enumerate_in_polytope(
        coset, polytope, probe if args.boundary == "half-open" else None)
    _emit({
        "task": "enumerate",
        "coset": args.coset,
        "boundary": args.boundary,
        "count": sum(m for _, m in window.points),
        "points": [
            {"point": point_to_json(p), "multiplicity": m}
            for p, m in window.points
        ],
    })
    return EXIT_OK


def _cmd_render(args) -> int:
    problem = load_problem(args.problem)
    polytope = _require(problem, "polytope", "polytope")
    translations = _require(problem, "translations", "translations")
    spec = _require(problem, "render", "render")
    svg = render_tiling(polytope, translations, spec["window"],
                        spec["palette"], spec["show_points"])
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    _emit({"task": "render", "out": args.out, "bytes": len(svg.encode())})
    return EXIT_OK


def _cmd_demo(args) -> int:
    from .lattice import Lattice
    from .polytope import from_vertices
    from .scalar import scalar_sqrt

    half = Fraction(1, 2)
    rect = from_vertices([(0, 0), (1, 0), (1, half), (0, half)])
    z2 = Lattice.standard(2)
    r2 = scalar_sqrt(2)
    q = QuasiPeriodicSet((Coset(z2, (0, 0)), Coset(z2, (r2 / 2, half))))

    positive = verify_constant_multiplicity(rect, None, q, ExactTorus2D())
    negatives = [
        verify_constant_multiplicity(
            rect, None, QuasiPeriodicSet((q.cosets[i],)), ExactTorus2D())
        for i in (0, 1)
    ]
    verdicts = [general_position_check(rect, q, i) for i in (0, 1)]
    refinement = theorem_1_4_pipeline(rect, None, z2, (0, 0), (r2 / 2, half))
    solution = synthesize(rect, None, CosetFamily(z2, ((0, 0), (0, half))),
                          ExactTorus2D())
    j = weyl_search((r2 / 2,), Fraction(1, 20), 100)

    payload = {
        "task": "demo-example-5-1",
        "verify_quasi_periodic": _certificate_payload(positive),
        "verify_single_cosets": [_certificate_payload(r) for r in negatives],
        "general_position": [_verdict_payload(v) for v in verdicts],
        "refinement": {
            "N": refinement.n,
            "verification": _certificate_payload(refinement.verification),
        },
        "synthesis": {
            "g_prime": list(solution.gprime),
            "m": solution.m,
        } if isinstance(solution, WeightSolution) else {"failure": solution.reason},
        "weyl_j": j,
    }
    if args.out:
        svg = render_tiling(rect, q, ((-2, -2), (3, 3)))
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
        payload["svg"] = args.out
    _emit(payload)
    expected = (
        isinstance(positive, TilingCertificate) and positive.m == 1
        and all(isinstance(r, Discrepancy) for r in negatives)
        and all(v.status == "disconnected" for v in verdicts)
        and refinement.n == 2
        and isinstance(refinement.verification, TilingCertificate)
        and refinement.verification.m == 2
        and isinstance(solution, WeightSolution)
        and solution.gprime == (1, 1) and solution.m == 1
        and j == 8
    )
    return EXIT_OK if expected else EXIT_DISPROOF


_COMMANDS = {
    "verify": _cmd_verify,
    "genpos": _cmd_genpos,
    "split": _cmd_split,
    "pipeline": _cmd_pipeline,
    "synthesize": _cmd_synthesize,
    "refine": _cmd_refine,
    "weyl": _cmd_weyl,
    "enumerate": _cmd_enumerate,
    "render": _cmd_render,
    "demo-example-5-1": _cmd_demo,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SignIndeterminate, PrecisionUnreachable, ModeUnavailable) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (InputError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MultitileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
