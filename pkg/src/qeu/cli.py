"""Command-line front end.

Subcommands cover the full pipeline: ``estimate`` (descent estimator),
``rank`` (many partners, best first), ``oracle`` (exhaustive lattice
reference), ``cut`` (level-set geometry as JSON), and ``bench`` (cost
comparison CSV). Every JSON output embeds a manifest describing the run.

Exit codes: 0 on success, 1 for validation and input problems, 2 for
budget violations and unexpected internal errors.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from typing import Any, Sequence

from .bench import report_to_csv, run_bench
from .estimator import EstimateResult, estimate, rank_partners
from .grid import (
    DEFAULT_BUDGET,
    BudgetError,
    argmax_sets,
    grid_utility,
    grid_distribution,
    qu_optimistic,
    qu_pessimistic,
)
from .model import (
    CaseBase,
    EstimatorConfig,
    ValidationError,
    validate_case_base,
    validate_query,
    validate_utility,
)
from .possibility import density_alpha_cut, distribution_alpha_cut, frontier

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # Usage problems are input problems: exit 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="qeu", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p_est = sub.add_parser("estimate", help="descent estimate for one case base")
    p_est.add_argument("--cases", required=True, help="case-base JSON file")
    p_est.add_argument("--utility", required=True, help="utility JSON file")
    p_est.add_argument("--step", type=float, default=0.01, help="ladder decrement")
    p_est.add_argument(
        "--refine", type=float, default=1e-6, help="bisection width, 0 disables"
    )
    p_est.add_argument("--out", help="write JSON here instead of stdout")

    p_rank = sub.add_parser("rank", help="rank partner case bases best first")
    p_rank.add_argument(
        "--partners", required=True, help="directory of per-partner case-base files"
    )
    p_rank.add_argument("--utility", required=True)
    p_rank.add_argument("--step", type=float, default=0.01)
    p_rank.add_argument("--refine", type=float, default=1e-6)
    p_rank.add_argument("--threads", type=int, default=1)
    p_rank.add_argument("--out", help="write JSON here instead of stdout")

    p_or = sub.add_parser("oracle", help="exhaustive lattice reference values")
    p_or.add_argument("--cases", required=True)
    p_or.add_argument("--utility", required=True)
    p_or.add_argument("--grid", type=int, required=True, help="lattice points per axis")
    p_or.add_argument(
        "--criterion",
        choices=["optimistic", "pessimistic", "pessimistic-negated"],
        default="optimistic",
    )
    p_or.add_argument("--threads", type=int, default=1)
    p_or.add_argument("--dump-field", help="also write the distribution field CSV here")
    p_or.add_argument("--out", help="write JSON here instead of stdout")

    p_cut = sub.add_parser("cut", help="level-set geometry at one level")
    p_cut.add_argument("--cases", required=True)
    p_cut.add_argument("--alpha", type=float, required=True)
    p_cut.add_argument(
        "--which",
        choices=["density", "distribution", "frontier"],
        default="distribution",
    )
    p_cut.add_argument("--out", help="write JSON here instead of stdout")

    p_bench = sub.add_parser("bench", help="classical vs estimator cost CSV")
    p_bench.add_argument(
        "--attrs", default="2..5", help="attribute range LO..HI (or a single count)"
    )
    p_bench.add_argument("--cases", type=int, default=30)
    p_bench.add_argument("--grid", type=int, default=21)
    p_bench.add_argument("--seed", type=int, default=42)
    p_bench.add_argument("--reps", type=int, default=3)
    p_bench.add_argument("--threads", type=int, default=1)
    p_bench.add_argument("--out", help="write CSV here instead of stdout")

    return parser


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            return json.load(fp)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from None


def _budget() -> int:
    raw = os.environ.get("QEU_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        budget = int(raw)
    except ValueError:
        raise ValidationError(f"QEU_BUDGET must be an integer, got {raw!r}") from None
    if budget < 1:
        raise ValidationError(f"QEU_BUDGET must be positive, got {budget}")
    return budget


def _manifest(
    subcommand: str,
    inputs: dict,
    step: float | None = None,
    refine: float | None = None,
    grid: int | None = None,
    seed: int | None = None,
    out: str | None = None,
) -> dict:
    return {
        "subcommand": subcommand,
        "inputs": inputs,
        "config": {"step": step, "refine": refine, "grid": grid, "seed": seed},
        "out": out,
    }


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fp:
            fp.write(text)


def _original_coords(case_base: CaseBase, coords: Sequence[float]) -> list[float] | None:
    if all(a.bounds is None for a in case_base.outcome_attrs):
        return None
    out = []
    for attr, c in zip(case_base.outcome_attrs, coords):
        if attr.bounds is None:
            out.append(float(c))
        else:
            lo, hi = attr.bounds
            out.append(lo + c * (hi - lo))
    return out


def _result_dict(case_base: CaseBase, result: EstimateResult) -> dict:
    doc = result.to_dict()
    for entry in doc["outcomes"]:
        original = _original_coords(case_base, entry["coords"])
        if original is not None:
            entry["coords_original"] = original
    return doc


def _cmd_estimate(args) -> int:
    doc = _load_json(args.cases)
    case_base = validate_case_base(doc)
    query = validate_query(doc, case_base)
    utility = validate_utility(_load_json(args.utility), case_base.n_outcome)
    config = EstimatorConfig(step=args.step, refine_tolerance=args.refine)
    result = estimate(
        case_base, query, case_base.polarity_vector, utility, config
    )
    payload = {
        "manifest": _manifest(
            "estimate",
            {"cases": args.cases, "utility": args.utility},
            step=args.step,
            refine=args.refine,
            out=args.out,
        ),
        **_result_dict(case_base, result),
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_rank(args) -> int:
    try:
        names = sorted(n for n in os.listdir(args.partners) if n.endswith(".json"))
    except OSError as exc:
        raise ValidationError(f"cannot read {args.partners}: {exc}") from None
    if not names:
        raise ValidationError(f"no partners found in {args.partners}")

    partners = []
    polarities: tuple[int, ...] | None = None
    for name in names:
        path = os.path.join(args.partners, name)
        doc = _load_json(path)
        try:
            case_base = validate_case_base(doc)
            query = validate_query(doc, case_base)
        except ValidationError as exc:
            raise ValidationError(f"{path}: {exc}") from None
        if polarities is None:
            polarities = case_base.polarity_vector
        elif case_base.polarity_vector != polarities:
            raise ValidationError(
                f"{path}: polarity vector {case_base.polarity_vector} differs from "
                f"{polarities} declared by {names[0]}"
            )
        partners.append((os.path.splitext(name)[0], case_base, query))

    utility = validate_utility(_load_json(args.utility), len(polarities))
    config = EstimatorConfig(step=args.step, refine_tolerance=args.refine)
    ranked = rank_partners(
        [(pid, cb, q) for pid, cb, q in partners],
        polarities,
        utility,
        config,
        threads=args.threads,
    )
    by_id = {pid: cb for pid, cb, _ in partners}
    payload = {
        "manifest": _manifest(
            "rank",
            {"partners": args.partners, "utility": args.utility},
            step=args.step,
            refine=args.refine,
            out=args.out,
        ),
        "ranking": [
            {"partner": pid, **_result_dict(by_id[pid], res)} for pid, res in ranked
        ],
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_oracle(args) -> int:
    doc = _load_json(args.cases)
    case_base = validate_case_base(doc)
    query = validate_query(doc, case_base)
    utility = validate_utility(_load_json(args.utility), case_base.n_outcome)
    if args.grid < 2:
        raise ValidationError(f"--grid must be at least 2, got {args.grid}")

    t0 = time.perf_counter()
    pi = grid_distribution(
        case_base,
        query,
        case_base.polarity_vector,
        args.grid,
        budget=_budget(),
        threads=args.threads,
    )
    t1 = time.perf_counter()
    u = grid_utility(utility, case_base.polarity_vector, args.grid)
    if args.criterion == "optimistic":
        value, _ = qu_optimistic(pi, u)
    else:
        value = qu_pessimistic(
            pi, u, negate_possibility=args.criterion == "pessimistic-negated"
        )
    p_points, o_points = argmax_sets(pi, u)
    t2 = time.perf_counter()

    if args.dump_field:
        with open(args.dump_field, "w", encoding="utf-8") as fp:
            pi.to_csv(fp)

    payload = {
        "manifest": _manifest(
            "oracle",
            {"cases": args.cases, "utility": args.utility},
            grid=args.grid,
            out=args.out,
        ),
        "criterion": args.criterion,
        "value": value,
        "P_points": [list(map(float, p)) for p in p_points],
        "O_points": [list(map(float, p)) for p in o_points],
        "timings": {"distribution_s": t1 - t0, "aggregation_s": t2 - t1},
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_cut(args) -> int:
    doc = _load_json(args.cases)
    case_base = validate_case_base(doc)
    query = validate_query(doc, case_base)
    polarities = case_base.polarity_vector
    manifest = _manifest("cut", {"cases": args.cases}, out=args.out)
    if args.which == "density":
        body = density_alpha_cut(case_base, query, args.alpha).to_dict()
    elif args.which == "distribution":
        body = distribution_alpha_cut(case_base, query, polarities, args.alpha).to_dict()
    else:
        points = frontier(case_base, query, polarities, args.alpha)
        body = {
            "level": float(args.alpha),
            "kind": "frontier",
            "points": [p.to_dict() for p in points],
        }
    _emit_json({"manifest": manifest, **body}, args.out)
    return 0


def _parse_attr_range(raw: str) -> list[int]:
    try:
        if ".." in raw:
            lo_s, hi_s = raw.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(raw)
    except ValueError:
        raise ValidationError(
            f"--attrs must look like LO..HI or a single count, got {raw!r}"
        ) from None
    if lo < 1 or hi < lo:
        raise ValidationError(f"--attrs range {raw!r} is empty or starts below 1")
    return list(range(lo, hi + 1))


def _cmd_bench(args) -> int:
    if args.grid < 2:
        raise ValidationError(f"--grid must be at least 2, got {args.grid}")
    report = run_bench(
        _parse_attr_range(args.attrs),
        n_cases=args.cases,
        resolution=args.grid,
        seed=args.seed,
        repetitions=args.reps,
        threads=args.threads,
        budget=_budget(),
    )
    buf = io.StringIO()
    report_to_csv(report, buf)
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8") as fp:
            fp.write(buf.getvalue())
    return 0


_COMMANDS = {
    "estimate": _cmd_estimate,
    "rank": _cmd_rank,
    "oracle": _cmd_oracle,
    "cut": _cmd_cut,
    "bench": _cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.subcommand](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
