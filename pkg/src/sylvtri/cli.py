"""Command-line interface: construct, verify, export, and tabulate.

Batch-oriented and deterministic: machine-readable output carries no
timestamps, and identical flags produce identical files.  Exit codes are
a stable contract: 0 success, 2 feasibility refusal, 3 verification
failure, 4 parse error, 5 domain error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from . import invariants, pipeline, subdivision, witness
from .errors import (
    ArtifactFormatError,
    DomainError,
    FeasibilityLimit,
    SylvtriError,
    VerificationFailure,
)
from .family import Family

EXIT_OK = 0
EXIT_FEASIBILITY = 2
EXIT_VERIFICATION = 3
EXIT_PARSE = 4
EXIT_DOMAIN = 5


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--quiet", action="store_true", help="suppress timing output")
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help="maximum worker threads (computation is currently sequential)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sylvtri",
        description="certified unimodular triangulations of Sylvester-weighted "
        "simplices and their toric resolution fans",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("triangulate", help="construct a certified triangulation")
    p.add_argument(
        "--family", required=True, choices=[f.value for f in Family]
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True, help="artifact output path")
    p.add_argument("--max-cells", type=int, default=5_000_000)
    p.add_argument("--cache-dir", default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="verify a stored artifact")
    p.add_argument("path")
    p.add_argument("--mode", choices=["full", "local"], default="full")
    _add_common(p)

    p = sub.add_parser("fan", help="export the resolution fan of an artifact")
    p.add_argument("path")
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("invariants", help="print the invariant tables")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    _add_common(p)

    p = sub.add_parser("stats", help="summarize a stored artifact")
    p.add_argument("path")
    _add_common(p)

    return parser


def _validate(args) -> None:
    if args.threads < 1:
        raise DomainError("--threads must be >= 1")
    if getattr(args, "n", 1) < 1:
        raise DomainError("--n must be >= 1")
    if getattr(args, "n_max", 1) < 1:
        raise DomainError("--n-max must be >= 1")


def cmd_triangulate(args) -> int:
    t0 = time.monotonic()
    art = pipeline.triangulate(
        Family(args.family), args.n, args.max_cells, args.cache_dir
    )
    pipeline.save(art, args.out)
    rep = subdivision.verify(art.triangulation)
    cert = witness.verify_regularity(art.triangulation, art.witness)
    line = (
        f"{args.family} {args.n} cells={len(art.triangulation.cells)} "
        f"points={len(art.triangulation.points)} "
        f"regular={str(cert.regular).lower()} "
        f"unimodular={str(rep.unimodular).lower()}"
    )
    if not args.quiet:
        line += f" elapsed={time.monotonic() - t0:.2f}s"
    print(line)
    if not (rep.valid and rep.unimodular and cert.regular):
        print("provenance:", list(art.provenance), file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_verify(args) -> int:
    art = pipeline.load(args.path)
    rep = subdivision.verify(
        art.triangulation,
        pairwise="full" if args.mode == "full" else "facets",
    )
    cert = witness.verify_regularity(art.triangulation, art.witness)
    print(
        f"valid={str(rep.valid).lower()} "
        f"simplicial={str(rep.simplicial).lower()} "
        f"unimodular={str(rep.unimodular).lower()} "
        f"regular={str(cert.regular).lower()} "
        f"checksum={rep.volume_checksum}"
    )
    for f in rep.failures[:10]:
        print("failure:", f, file=sys.stderr)
    for c, p, margin in cert.violating_pairs[:10]:
        print(f"regularity violation: cell {c} point {p} margin {margin}",
              file=sys.stderr)
    ok = rep.valid and rep.simplicial and rep.unimodular and cert.regular
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_fan(args) -> int:
    art = pipeline.load(args.path)
    fan = invariants.fan_from_triangulation(art)
    invariants.save_fan(fan, args.out)
    print(
        " ".join(k for k, v in fan.flags.items() if v) or "(no flags)",
        f"rays={len(fan.rays)} cones={len(fan.cones)}",
    )
    return EXIT_OK if all(fan.flags.values()) else EXIT_VERIFICATION


def cmd_invariants(args) -> int:
    rows = invariants.invariant_table(args.n_max)
    header = ["n", "index", "betti_sum", "euler_i1", "euler_i2",
              "middle_hodge_i1", "middle_hodge_i2"]
    table = [
        [r.n, r.index, r.betti_sum, r.euler_i1, r.euler_i2,
         "" if r.middle_hodge_i1 is None else r.middle_hodge_i1,
         "" if r.middle_hodge_i2 is None else r.middle_hodge_i2]
        for r in rows
    ]
    if args.csv:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(table)
        return EXIT_OK
    widths = [
        max(len(str(h)), *(len(str(row[i])) for row in table))
        for i, h in enumerate(header)
    ]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for row in table:
        print("  ".join(str(x).rjust(w) for x, w in zip(row, widths)))
    return EXIT_OK


def cmd_stats(args) -> int:
    art = pipeline.load(args.path)
    t = art.triangulation
    print(
        f"{art.spec.family.value} n={art.spec.n} "
        f"points={len(t.points)} cells={len(t.cells)} "
        f"dim={t.ambient_dim} provenance_steps={len(art.provenance)}"
    )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "triangulate": cmd_triangulate,
        "verify": cmd_verify,
        "fan": cmd_fan,
        "invariants": cmd_invariants,
        "stats": cmd_stats,
    }
    try:
        _validate(args)
        return handlers[args.command](args)
    except FeasibilityLimit as e:
        print(f"feasibility refusal: {e}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except VerificationFailure as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except ArtifactFormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, SylvtriError) as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
