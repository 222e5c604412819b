"""Command-line interface: construct, verify, zeros, sos, invariants, report.

Exit codes: 0 all checks passed, 1 a mathematical claim check failed,
2 usage or configuration error.  All randomized work is driven by a single
seed (flag ``--seed`` or environment variable ``RRL_SEED``); identical
configuration and seed produce byte-identical output files, except for the
``generated_at`` field of reports, which comparisons must ignore.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .chern import CurveBundleParams, c2_number_sym2, chern_classes_sym2, degree_v2, sos_obstruction
from .sections import (
    BundleSpec,
    ChartError,
    build_chart,
    build_resultant_form,
)
from .serialize import (
    atomic_write_json,
    atomic_write_text,
    fraction_to_str,
    points_from_text,
    points_to_text,
    poly_from_text,
    poly_to_text,
)
from .sos import GramUsageError, certify
from .verify import distinct_gaussian_rationals, verify_bundle
from .sections import random_zero_points

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("RRL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RRL_SEED must be an integer, got {raw!r}")


def _timestamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _emit_json(payload: dict, out: Optional[str]) -> None:
    if out:
        atomic_write_json(out, payload)
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def cmd_construct(args) -> int:
    spec = BundleSpec.parse(args.bundle)
    form = build_resultant_form(spec)
    metadata = {
        "schema_version": SCHEMA_VERSION,
        "command": "construct",
        **form.metadata(),
    }
    if args.out:
        atomic_write_text(args.out, poly_to_text(form.poly))
        atomic_write_json(args.out + ".json", metadata)
    else:
        sys.stdout.write(poly_to_text(form.poly))
    print(json.dumps(metadata, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    records, form = verify_bundle(
        args.bundle,
        samples=args.samples,
        seed=args.seed,
        families=args.zero_families,
        per_family=args.zeros_per_family,
    )
    failed = [r for r in records if r.status == "fail"]
    findings = [r for r in records if r.status == "finding"]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "bundle": str(form.spec),
        "seed": args.seed,
        "samples": args.samples,
        "generated_at": _timestamp(),
        "checks": [r.to_dict() for r in records],
        "summary": {
            "passed": sum(1 for r in records if r.status == "pass"),
            "failed": len(failed),
            "findings": len(findings),
        },
    }
    _emit_json(report, args.out)
    return EXIT_CLAIM_FAILED if failed else EXIT_OK


def cmd_zeros(args) -> int:
    spec = BundleSpec.parse(args.bundle)
    form = build_resultant_form(spec)
    chart = build_chart(spec)
    if args.count % args.per_family != 0:
        raise UsageError("--count must be a multiple of --per-family")
    families = args.count // args.per_family
    base_points = distinct_gaussian_rationals(families, args.seed)
    import random as _random

    rng = _random.Random(args.seed + 1)
    points = []
    for z0 in base_points:
        points.extend(random_zero_points(chart, z0, args.per_family, rng, coeff_bound=3))
    for point in points:
        value = form.poly.evaluate(point)
        if value != 0:
            raise AssertionError(f"generated point is not an exact zero: {point}")
    atomic_write_text(args.out, points_to_text(points))
    print(
        json.dumps(
            {
                "command": "zeros",
                "bundle": str(spec),
                "count": len(points),
                "families": families,
                "seed": args.seed,
                "out": args.out,
            },
            sort_keys=True,
        ),
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_sos(args) -> int:
    with open(args.poly, encoding="utf-8") as handle:
        poly, _names = poly_from_text(handle.read())
    zeros = None
    if args.zeros:
        with open(args.zeros, encoding="utf-8") as handle:
            zeros = points_from_text(handle.read())
    certificate = certify(
        poly,
        mode=args.mode,
        zeros=zeros,
        tol=args.tol,
        max_iter=args.max_iter,
        seed=args.seed,
    )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "sos",
        "poly_file": args.poly,
        "mode": args.mode,
        "seed": args.seed,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "certificate": certificate.to_json_dict(),
    }
    _emit_json(payload, args.out)
    if certificate.kind == "undecided":
        return EXIT_CLAIM_FAILED
    return EXIT_OK


def cmd_invariants(args) -> int:
    params = CurveBundleParams(d=args.d, g=args.g, r=args.r)
    c1, _c2 = chern_classes_sym2(params)
    c2_number = c2_number_sym2(params)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "invariants",
        "d": args.d,
        "g": args.g,
        "r": args.r,
        "c1": {"x": fraction_to_str(c1.cx), "delta": fraction_to_str(c1.cdelta)},
        "c2_number": fraction_to_str(c2_number),
    }
    if args.r == 2:
        payload["degree_v2"] = degree_v2(args.d, args.g)
        payload["obstruction"] = sos_obstruction(args.d, args.g).to_dict()
    _emit_json(payload, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    directory = args.dir
    if not os.path.isdir(directory):
        raise UsageError(f"not a directory: {directory}")
    artifacts = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".json"):
            continue
        path = os.path.join(directory, name)
        try:
            with open(path, encoding="utf-8") as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError):
            continue
        if isinstance(data, dict) and "command" in data:
            artifacts.append({"file": name, "data": data})
    if not artifacts:
        raise UsageError(f"no recognizable artifacts in {directory}")
    summary_lines: List[str] = []
    failures = 0
    for artifact in artifacts:
        data = artifact["data"]
        command = data["command"]
        if command == "construct":
            summary_lines.append(
                f"[construct] {data.get('bundle')}: degree {data.get('degree')}, "
                f"{data.get('term_count')} terms in {data.get('real_dim')} variables"
            )
        elif command == "verify":
            summary = data.get("summary", {})
            failures += summary.get("failed", 0)
            summary_lines.append(
                f"[verify] {data.get('bundle')}: {summary.get('passed', 0)} passed, "
                f"{summary.get('failed', 0)} failed, {summary.get('findings', 0)} findings"
            )
            for check in data.get("checks", []):
                summary_lines.append(
                    f"    - {check.get('claim')}: {check.get('status')}"
                )
        elif command == "sos":
            cert = data.get("certificate", {})
            summary_lines.append(
                f"[sos] {data.get('poly_file')}: {cert.get('kind')} via {cert.get('branch')}"
            )
            if cert.get("kind") == "undecided":
                failures += 1
        elif command == "invariants":
            summary_lines.append(
                f"[invariants] d={data.get('d')} g={data.get('g')} r={data.get('r')}: "
                f"c2 number {data.get('c2_number')}"
                + (
                    f", vanishing-pair degree {data.get('degree_v2')}, "
                    f"obstructed {data.get('obstruction', {}).get('obstructed')}"
                    if "degree_v2" in data
                    else ""
                )
            )
        elif command == "zeros":
            summary_lines.append(f"[zeros] {data.get('count')} points for {data.get('bundle')}")
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "report",
        "generated_at": _timestamp(),
        "artifact_count": len(artifacts),
        "artifacts": [a["file"] for a in artifacts],
        "failures": failures,
        "summary_text": summary_lines,
    }
    _emit_json(payload, args.out)
    for line in summary_lines:
        print(line, file=sys.stderr)
    return EXIT_CLAIM_FAILED if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resforms",
        description=(
            "Nonnegative resultant forms of conjugation-symmetric section pairs "
            "on the projective line, and their sum-of-squares certification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_construct = sub.add_parser("construct", help="build a form and write it with metadata")
    p_construct.add_argument("--bundle", required=True, help="bundle spec, e.g. 'O(3)+O(3)'")
    p_construct.add_argument("--out", help="output polynomial file (metadata goes to OUT.json)")
    p_construct.set_defaults(func=cmd_construct)

    p_verify = sub.add_parser("verify", help="run the exact claim checks for a bundle")
    p_verify.add_argument("--bundle", required=True)
    p_verify.add_argument("--samples", type=int, default=100_000)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--zero-families", type=int, default=25)
    p_verify.add_argument("--zeros-per-family", type=int, default=4)
    p_verify.add_argument("--out", help="report JSON path (stdout if omitted)")
    p_verify.set_defaults(func=cmd_verify)

    p_zeros = sub.add_parser("zeros", help="emit exact zeros of a form")
    p_zeros.add_argument("--bundle", required=True)
    p_zeros.add_argument("--count", type=int, default=100)
    p_zeros.add_argument("--per-family", type=int, default=4)
    p_zeros.add_argument("--seed", type=int, default=None)
    p_zeros.add_argument("--out", required=True)
    p_zeros.set_defaults(func=cmd_zeros)

    p_sos = sub.add_parser("sos", help="certify sum-of-squares status of a polynomial file")
    p_sos.add_argument("--poly", required=True)
    p_sos.add_argument("--mode", choices=["auto", "exact-only", "sdp-only"], default="auto")
    p_sos.add_argument("--zeros", help="zero-list file for facial reduction")
    p_sos.add_argument("--tol", type=float, default=1e-8)
    p_sos.add_argument("--max-iter", type=int, default=50_000)
    p_sos.add_argument("--seed", type=int, default=None)
    p_sos.add_argument("--out", help="certificate JSON path (stdout if omitted)")
    p_sos.set_defaults(func=cmd_sos)

    p_inv = sub.add_parser("invariants", help="characteristic-class arithmetic for (d, g, r)")
    p_inv.add_argument("--d", type=int, required=True)
    p_inv.add_argument("--g", type=int, required=True)
    p_inv.add_argument("--r", type=int, default=2)
    p_inv.add_argument("--out")
    p_inv.set_defaults(func=cmd_invariants)

    p_report = sub.add_parser("report", help="aggregate artifact JSONs from a directory")
    p_report.add_argument("--dir", required=True)
    p_report.add_argument("--out")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except (UsageError, ChartError, GramUsageError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
