"""Command-line front end.

Every subcommand prints one report (JSON by default) carrying the tool
version, the parsed configuration and the wall time.  Exit status: 0 ok,
1 a verification counter is nonzero, 2 bad configuration, 3 enumeration
budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from pathlib import Path

from . import __version__
from . import bounds, pluecker, pointcount, spectral
from .exactalg import FieldError, FieldMatrix, FieldPolynomial, check_prime, commutator, poly_eval_matrix

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# --- input parsing -----------------------------------------------------------------


def _primes(text: str) -> list[int]:
    try:
        primes = [int(t) for t in text.split(",") if t.strip()]
        for p in primes:
            check_prime(p)
    except (ValueError, FieldError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return primes


def _prime(text: str) -> int:
    return _primes(text)[0]


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _composition(text: str) -> bounds.Composition:
    try:
        return bounds.Composition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def read_matrices(path: str | Path) -> list[FieldMatrix]:
    """Matrices in the plain-text fixture format.

    Each matrix starts with a header line ``p rows cols`` followed by its rows;
    consecutive matrices are separated by a blank line.
    """
    text = Path(path).read_text()
    blocks = [b for b in text.strip().split("\n\n") if b.strip()]
    out = []
    for block in blocks:
        lines = [ln.split() for ln in block.strip().splitlines() if ln.strip() and not ln.startswith("#")]
        try:
            p, rows, cols = (int(t) for t in lines[0])
            body = [[int(t) for t in ln] for ln in lines[1:]]
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if len(body) != rows or any(len(r) != cols for r in body):
            raise ConfigError(f"{path}: header says {rows}x{cols}, body does not match")
        out.append(FieldMatrix.from_rows(body, p))
    if not out:
        raise ConfigError(f"{path}: no matrix found")
    return out


def write_matrices(matrices: list[FieldMatrix]) -> str:
    parts = []
    for m in matrices:
        lines = [f"{m.modulus} {m.rows} {m.cols}"] + [" ".join(map(str, r)) for r in m.tolist()]
        parts.append("\n".join(lines))
    return "\n\n".join(parts) + "\n"


# --- subcommands -----------------------------------------------------------------------
#
# Each returns (result dict, number of failed verification counters).


def cmd_bound(args) -> tuple[dict, int]:
    if args.n is not None and args.n != args.composition.n:
        raise ConfigError(f"composition sums to {args.composition.n}, not n={args.n}")
    return bounds.classify(args.composition).to_dict(), 0


def cmd_search(args) -> tuple[dict, int]:
    return bounds.search(args.n, threads=args.threads).to_dict(), 0


def cmd_count(args) -> tuple[dict, int]:
    if args.variety == "nt":
        table = pointcount.nt_table(args.n, args.primes, args.budget, args.threads)
    elif args.variety == "ct":
        table = pointcount.ct_table(args.n, args.primes, args.budget, args.threads)
    else:
        if args.composition is None:
            raise ConfigError("--variety ntj needs --composition")
        if args.n is not None and args.n != args.composition.n:
            raise ConfigError(f"composition sums to {args.composition.n}, not n={args.n}")
        table = pointcount.nt_composition_table(args.composition, args.primes, args.budget, args.threads)
    result = {"table": table.to_dict()}
    if len(args.primes) >= 2:
        result["estimate"] = pointcount.estimate_dimension(table).to_dict()
    return result, 0


def cmd_example_a(args) -> tuple[dict, int]:
    report = pointcount.verify_example_a(args.q, args.budget)
    return report.to_dict(), report.uncovered


def cmd_lemma11(args) -> tuple[dict, int]:
    report = bounds.vmpq_report(args.m, args.p, args.q)
    result = report.to_dict()
    failures = 0
    if args.verify:
        full = pointcount.vmpq_table(args.m, args.p, args.q, args.primes, budget=args.budget)
        est = pointcount.estimate_dimension(full)
        strata = []
        for a, b, d in report.components:
            table = pointcount.vmpq_table(args.m, args.p, args.q, args.primes, a, b, args.budget)
            e = pointcount.estimate_dimension(table)
            ok = e.estimated_dim == d
            failures += not ok
            strata.append({"a": a, "b": b, "dim": d, "table": table.to_dict(), "estimate": e.to_dict(), "agrees": ok})
        full_ok = est.estimated_dim == report.dim
        failures += not full_ok
        ci_ok = True
        if report.is_complete_intersection:
            ci_ok = all(d == report.ambient_dim - report.equation_count for _, _, d in report.components)
            failures += not ci_ok
        result["verification"] = {
            "full": {"table": full.to_dict(), "estimate": est.to_dict(), "agrees": full_ok},
            "strata": strata,
            "ci_pure_dimension": ci_ok,
        }
    return result, failures


def cmd_spectral(args) -> tuple[dict, int]:
    mats = read_matrices(args.matrix)
    if len(mats) == 1:
        return spectral.spectral_data(mats[0]).to_dict(), 0
    return spectral.lemma4_partition(mats[0], mats[1]).to_dict(), 0


def cmd_gamma(args) -> tuple[dict, int]:
    mats = read_matrices(args.pair)
    if len(mats) != 2:
        raise ConfigError(f"{args.pair}: expected two matrices, found {len(mats)}")
    pencil = pluecker.MatrixPencil(*mats)
    if pluecker.in_c0(pencil):
        return {"in_c0": True}, 0
    v = pluecker.gamma(pencil)
    residuals = pluecker.image_equation_residuals(v)
    return {
        "in_c0": False,
        "commuting": pencil.is_commuting(),
        "pluecker": v.to_dict(),
        "image_residuals": residuals.tolist(),
    }, 0


def cmd_example_e(args) -> tuple[dict, int]:
    report = pluecker.verify_example_e(args.q)
    return report.to_dict(), 0 if report.all_equal else 1


def cmd_gamma4(args) -> tuple[dict, int]:
    report = pluecker.verify_gamma4_image(args.q, args.budget)
    return report.to_dict(), report.violations + report.uncovered + report.rank_locus_mismatch


def cmd_involution(args) -> tuple[dict, int]:
    ok = pointcount.verify_involution(args.n, args.q, args.samples, args.seed, args.budget)
    return {"n": args.n, "q": args.q, "stable": ok}, 0 if ok else 1


def _random_matrix(rng: random.Random, n: int, p: int, upper: bool = False) -> FieldMatrix:
    return FieldMatrix(n, n, (rng.randrange(p) if (not upper or j >= i) else 0 for i in range(n) for j in range(n)), p)


def cmd_invariants(args) -> tuple[dict, int]:
    """Seeded random invariant suites (gamma equivariance, projector identities)."""
    rng = random.Random(args.seed)
    p = args.prime
    checks = failures = 0
    if args.suite == "gamma":
        for _ in range(args.samples):
            n = rng.randint(2, args.n)
            pencil = pluecker.MatrixPencil(_random_matrix(rng, n, p), _random_matrix(rng, n, p))
            if pluecker.in_c0(pencil):
                continue
            checks += 1
            v = pluecker.gamma(pencil)
            failures += pluecker.image_equation_residuals(v) != commutator(pencil.x, pencil.y)
            g = _random_matrix(rng, 2, p)
            if pluecker.det2(g):
                moved = pluecker.gl2_act(g, pencil)
                failures += pluecker.gamma(moved) != v.scaled(pluecker.det2(g))
    else:
        for _ in range(args.samples):
            n = rng.randint(1, args.n)
            x = _random_matrix(rng, n, p, upper=True)
            checks += 1
            try:
                h = FieldPolynomial([rng.randrange(p) for _ in range(rng.randint(1, n + 1))], p)
                spectral.lemma4_partition(x, poly_eval_matrix(h, x))
            except FieldError:
                failures += 1
    return {"suite": args.suite, "prime": p, "checks": checks, "failures": failures}, failures


# --- driver -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--budget", type=_positive, default=None,
                        help="max enumerated candidates (default: $COMVAR_BUDGET or 1e9)")
    common.add_argument("--threads", type=_positive, default=1, help="worker cap")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="comvar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="certificate for one composition")
    p.add_argument("--composition", type=_composition, required=True)
    p.add_argument("--n", type=_positive)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search", parents=[common], help="scan all compositions of n")
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("count", parents=[common], help="point counts and dimension estimate")
    p.add_argument("--variety", choices=["nt", "ct", "ntj"], default="nt")
    p.add_argument("--n", type=_positive)
    p.add_argument("--composition", type=_composition)
    p.add_argument("--primes", type=_primes, default=[2, 3, 5])
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("example-a", parents=[common], help="NT_4 as a union of two loci")
    p.add_argument("--q", type=_prime, required=True)
    p.set_defaults(func=cmd_example_a)

    p = sub.add_parser("lemma11", parents=[common], help="components of AB = 0")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--verify", action="store_true", help="check dimensions by point counting")
    p.add_argument("--primes", type=_primes, default=[2, 3, 5])
    p.set_defaults(func=cmd_lemma11)

    p = sub.add_parser("spectral", parents=[common], help="projectors (one matrix) or block partition (pair)")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("gamma", parents=[common], help="Plücker coordinates of a pencil")
    p.add_argument("--pair", required=True)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("example-e", parents=[common], help="image of gamma_2 vs its linear equations")
    p.add_argument("--q", type=_prime, required=True)
    p.set_defaults(func=cmd_example_e)

    p = sub.add_parser("gamma4", parents=[common], help="gamma_4 on NT_4 and its two loci")
    p.add_argument("--q", type=_prime, required=True)
    p.set_defaults(func=cmd_gamma4)

    p = sub.add_parser("involution", parents=[common], help="anti-transpose stability of NT_n")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--q", type=_prime, required=True)
    p.add_argument("--samples", type=_positive, default=200)
    p.set_defaults(func=cmd_involution)

    p = sub.add_parser("invariants", parents=[common], help="seeded random invariant suites")
    p.add_argument("--suite", choices=["gamma", "spectral"], required=True)
    p.add_argument("--n", type=_positive, default=4)
    p.add_argument("--prime", type=_prime, default=5)
    p.add_argument("--samples", type=_positive, default=500)
    p.set_defaults(func=cmd_invariants)
    return parser


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "out", "format"):
            continue
        out[k] = str(v) if isinstance(v, bounds.Composition) else v
    return out


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = list(_flatten(report))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for k, v in rows:
            writer.writerow([k, json.dumps(v) if isinstance(v, list) else v])
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        result, failures = args.func(args)
    except pointcount.BudgetExceeded as exc:
        print(f"comvar: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, bounds.GuardError, FieldError, ValueError, OSError) as exc:
        print(f"comvar: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = {
        "tool": "comvar",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "result": result,
        "failures": int(failures),
        "wall_time_s": round(time.perf_counter() - start, 6),
    }
    text = render(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_VERIFY if failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
