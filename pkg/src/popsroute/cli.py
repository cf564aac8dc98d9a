"""Command-line front end: gen, route, verify, bound, bench.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 internal error. Set POPS_LOG (e.g. DEBUG, INFO) for log output.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import bench as benchmod
from .bounds import lower_bound
from .model import (NetworkConfig, Permutation, PopsError, format_permutation,
                    parse_permutation_text, validate_permutation)
from .permgen import KINDS, PermSpec, generate
from .router import Schedule, route, single_slot_route_if_possible
from .simulator import execute

log = logging.getLogger("popsroute")

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3

_KIND_ALIASES = {"cyclic_shift": "cyclic", "hypercube_flip": "hypercube", "mesh_shift": "mesh"}


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _add_perm_args(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("permutation")
    src.add_argument("--perm", choices=KINDS + tuple(_KIND_ALIASES),
                     help="generate a named permutation")
    src.add_argument("--perm-file", type=Path,
                     help="read a permutation (whitespace-separated or JSON array)")
    src.add_argument("--seed", type=int, default=0)
    src.add_argument("--offset", type=int, default=1, help="cyclic shift amount")
    src.add_argument("--b", type=int, default=0, help="hypercube bit to flip")
    src.add_argument("--N", type=int, default=None, help="mesh side (n = N*N)")
    src.add_argument("--axis", choices=("column", "row"), default="column")
    src.add_argument("--direction", choices=("up", "down", "left", "right"), default=None)
    src.add_argument("--sigma", type=_int_list, default=None,
                     help="BPC bit permutation: output bit j takes input bit sigma[j]")
    src.add_argument("--mask", type=lambda s: int(s, 0), default=0,
                     help="BPC complement mask")


def _perm_spec(args: argparse.Namespace, n: int) -> PermSpec:
    kind = _KIND_ALIASES.get(args.perm, args.perm)
    direction = args.direction or ("up" if args.axis == "column" else "right")
    return PermSpec(kind, n, seed=args.seed, offset=args.offset, b=args.b, N=args.N,
                    axis=args.axis, direction=direction, sigma=args.sigma, mask=args.mask)


def load_permutation(args: argparse.Namespace, n: int) -> tuple[Permutation, dict]:
    """The permutation named on the command line, and a description of its source."""
    if args.perm_file is not None and args.perm is not None:
        raise UsageError("give either --perm or --perm-file, not both")
    if args.perm_file is not None:
        try:
            text = args.perm_file.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.perm_file}: {exc}") from None
        pi = validate_permutation(parse_permutation_text(text), n)
        return pi, {"file": str(args.perm_file)}
    if args.perm is None:
        raise UsageError("a permutation is required: --perm KIND or --perm-file PATH")
    spec = _perm_spec(args, n)
    return generate(spec), spec.describe()


def _config(args: argparse.Namespace) -> NetworkConfig:
    if args.d is None or args.g is None:
        raise UsageError("--d and --g are required")
    return NetworkConfig(args.d, args.g)


def _emit(args: argparse.Namespace, record: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(record, indent=2))
    else:
        print(text)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.n is not None:
        n = args.n
    elif args.d is not None and args.g is not None:
        n = args.d * args.g
    else:
        raise UsageError("gen needs --n or both --d and --g")
    pi, _ = load_permutation(args, n)
    out = format_permutation(pi)
    if args.out is not None:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_route(args: argparse.Namespace) -> int:
    cfg = _config(args)
    pi, source = load_permutation(args, cfg.n)
    timings = {}

    t0 = time.perf_counter()
    schedule = route(cfg, pi)
    timings["route"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    verdict = execute(cfg, pi, schedule)
    timings["simulate"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    bound = lower_bound(cfg, pi)
    baseline = single_slot_route_if_possible(cfg, pi) is not None
    timings["bound"] = time.perf_counter() - t0

    report = {
        "config": {"d": cfg.d, "g": cfg.g, "n": cfg.n},
        "permutation": source,
        "slots_used": len(schedule),
        "theorem_slots": cfg.theorem_slots(),
        "rounds": schedule.rounds,
        "single_slot_baseline": baseline,
        "bound": bound.to_json(),
        "delivered": verdict.delivered,
        "violations": [str(v) for v in verdict.violations],
        "wall_time": {k: round(v, 6) for k, v in timings.items()},
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "schedule.json").write_text(schedule.dumps())
    (out / "report.json").write_text(json.dumps(report, indent=2) + "\n")

    ok = verdict.delivered and len(schedule) == cfg.theorem_slots()
    _emit(args, report,
          f"{cfg}: {len(schedule)} slots (theorem {cfg.theorem_slots()}, lower bound "
          f"{bound.lower_bound}), {'delivered' if verdict.delivered else 'NOT delivered'}; "
          f"wrote {out / 'schedule.json'}")
    if not ok:
        for v in verdict.violations:
            log.error("%s", v)
        log.error("self-verification failed for %s", cfg)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        text = Path(args.schedule).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read schedule {args.schedule}: {exc}") from None
    schedule = Schedule.loads(text)
    cfg = schedule.config
    if (args.d is not None and args.d != cfg.d) or (args.g is not None and args.g != cfg.g):
        raise UsageError(f"schedule is for {cfg}, not POPS({args.d},{args.g})")
    pi, _ = load_permutation(args, cfg.n)
    verdict = execute(cfg, pi, schedule)
    record = verdict.to_json()
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "verdict.json").write_text(verdict.dumps())
    lines = [str(v) for v in verdict.violations]
    lines.append(f"{cfg}: {'delivered' if verdict.delivered else 'NOT delivered'} "
                 f"after {verdict.slots_used} slots")
    _emit(args, record, "\n".join(lines))
    return EXIT_OK if verdict.delivered and not verdict.violations else EXIT_FAILED


def cmd_bound(args: argparse.Namespace) -> int:
    cfg = _config(args)
    pi, _ = load_permutation(args, cfg.n)
    report = lower_bound(cfg, pi)
    props = ",".join(sorted(report.applicable_props)) or "none"
    lines = [f"{cfg}: lower bound {report.lower_bound} slots (applicable: {props})"]
    lines += [f"  {p} not applicable: {why}" for p, why in sorted(report.hypothesis_witnesses.items())]
    _emit(args, report.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    cells = [(g, g) for g in args.grid]
    if args.d1:
        cells += [(1, g * g) for g in args.grid]
    rows = benchmod.run_bench(cells, seeds=range(args.seed, args.seed + args.seeds),
                              repeats=args.repeats, jobs=args.jobs)
    csv = benchmod.to_csv(rows)
    exponent = benchmod.diagonal_exponent(rows)
    if exponent is not None:
        csv += f"# route_time ~ g^{exponent:.3f} on the d=g diagonal\n"
    if args.out is not None:
        Path(args.out).write_text(csv)
    sys.stdout.write(csv)
    return EXIT_OK if all(r.delivered for r in rows) else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--d", type=int, default=None, help="processors per group")
        p.add_argument("--g", type=int, default=None, help="number of groups")
        p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("gen", help="write a permutation file")
    common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    _add_perm_args(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("route", help="route a permutation and self-verify the schedule")
    common(p)
    p.add_argument("--out", default="pops-out", help="directory for schedule.json and report.json")
    _add_perm_args(p)
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("verify", help="simulate a schedule and check delivery")
    common(p)
    p.add_argument("--schedule", required=True, help="schedule JSON file")
    p.add_argument("--out", default=None, help="directory for verdict.json")
    _add_perm_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="slot lower bound for a permutation")
    common(p)
    _add_perm_args(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("bench", help="time route/simulate on the d=g diagonal")
    p.add_argument("--grid", type=_int_list, default=(32, 64, 128), help="g values")
    p.add_argument("--seeds", type=int, default=1, help="random permutations per cell")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--repeats", type=int, default=3, help="timing repeats (best kept)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--d1", action="store_true", help="also time d=1 rows with the same n")
    p.add_argument("--out", default=None, help="also write the CSV here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("POPS_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PopsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
