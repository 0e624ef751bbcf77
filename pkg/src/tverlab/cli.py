"""Command-line workbench: every command emits JSON-line report records.

Each record ties the command to a claim tag, echoes its inputs, and carries
self-contained certificate payloads, so any report can be re-verified later
by ``tverlab verify <report.jsonl>`` using only the exact kernel and the
feasibility engine.

Exit status: 0 = computed and all requested claim checks passed; 1 = a claim
check failed (the record says which); 2 = input error; 3 = an exhaustive
enumeration guard was hit.  Identical invocations with identical seeds
produce byte-identical reports apart from the timing field.

``--out`` appends records to a file; ``search-c`` also reads it back to
resume an interrupted scan deterministically.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Dict, List

from . import search as searchmod
from .errors import InputError, ParseError, ResourceGuardError
from .feasibility import hulls_common_point, verify_outcome
from .kernel import Hyperplane, PointSet
from .ordertype import (
    MomentSpec,
    gale_facets,
    is_neighborly,
    is_order_homogeneous,
    moment_points,
    path_crossings,
)
from .pointset_io import (
    ReportRecord,
    emit_pointset,
    format_rational,
    jsonable,
    load_records,
    outcome_payload,
    parse_pointset,
    parse_rational,
    payload_outcome,
    replay_record,
)
from .search import (
    Counterexample,
    NoneFound,
    SearchStrategy,
    check_growth_inequality,
    n_line,
    n_line_formula,
    scan_c_lower,
    t_line,
    verified_sixteen_point_example,
)
from .tolerance import (
    Partition,
    alternating_bound,
    alternating_bound_even,
    alternating_partition,
    check_tolerance_sandwich,
    partition_tolerance,
    set_tolerance,
    tolerance_upper_bound,
)

# claim tags are stable wire-format identifiers used by downstream tooling
CLAIM_GALE = "Lemma2.1"
CLAIM_CROSSINGS = "Lemma2.2"
CLAIM_ALTERNATING_BOUND = "Lemma3.2"
CLAIM_EVEN_BOUND = "EvenD"
CLAIM_SCAN = "Problem3.3"
CLAIM_SANDWICH_UPPER = "Thm3.4-upper"
CLAIM_TOLERANCE_CAP = "Prop4.1"
CLAIM_SIXTEEN = "Figure2"
CLAIM_LINE_TIGHT = "TightD1"
CLAIM_GROWTH = "Thm1.1-d1"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_pointset(path: str) -> PointSet:
    return parse_pointset(_read_text(path))


def _parse_alphas(args) -> List:
    if args.alphas is not None:
        return [parse_rational(tok) for tok in args.alphas.split(",") if tok.strip()]
    if args.alphas_file is not None:
        toks = _read_text(args.alphas_file).split()
        return [parse_rational(tok) for tok in toks]
    raise InputError("provide --alphas or --alphas-file")


def _parse_blocks(spec: str, n: int) -> Partition:
    blocks = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            blocks.append([int(tok) for tok in part.split(",") if tok.strip()])
        except ValueError:
            raise InputError(f"block spec {part!r} is not a comma list of indices")
    return Partition.from_blocks(n, blocks)


def _partition_for(args, n: int) -> Partition:
    if getattr(args, "alternating", None):
        return alternating_partition(n, args.alternating)
    if getattr(args, "blocks", None):
        return _parse_blocks(args.blocks, n)
    raise InputError("provide --blocks or --alternating")


def _blocks_points(X: PointSet, partition: Partition):
    return [[X.points[i - 1] for i in block] for block in partition.blocks()]


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (records, claim_failed)


def _cmd_gen(args):
    alphas = _parse_alphas(args)
    spec = MomentSpec(args.dim, alphas)
    ps = moment_points(spec)
    text = emit_pointset(ps)
    if args.pointset_out:
        Path(args.pointset_out).write_text(text)
    record = ReportRecord(
        command="gen",
        inputs={"dim": args.dim, "alphas": [format_rational(a) for a in alphas]},
        claim=None,
        outcome={"pointset": ps, "text": text},
        seed=args.seed,
    )
    return [record], False


def _cmd_homog(args):
    ps = _load_pointset(args.pointset)
    result = is_order_homogeneous(ps)
    outcome = {
        "homogeneous": result.homogeneous,
        "sign": result.sign,
        "trivial": result.trivial,
        "witness": result.witness,
    }
    failed = False
    if args.expect is not None:
        expected = args.expect == "homogeneous"
        failed = result.homogeneous != expected
        outcome["expected"] = args.expect
    record = ReportRecord(
        command="homog",
        inputs={"pointset": ps},
        claim="OrderType",
        outcome=outcome,
        seed=args.seed,
    )
    return [record], failed


def _cmd_facets(args):
    fs = gale_facets(args.n, args.dim)
    record = ReportRecord(
        command="facets",
        inputs={"n": args.n, "dim": args.dim},
        claim=CLAIM_GALE,
        outcome={"count": len(fs), "facets": [list(f) for f in fs.sorted()]},
        seed=args.seed,
    )
    return [record], False


def _cmd_neighborly(args):
    value = is_neighborly(args.n, args.dim)
    record = ReportRecord(
        command="neighborly",
        inputs={"n": args.n, "dim": args.dim},
        claim="Neighborly",
        outcome={"neighborly": value, "k": args.dim // 2},
        seed=args.seed,
    )
    return [record], not value


def _cmd_crossings(args):
    ps = _load_pointset(args.pointset)
    normal = [parse_rational(tok) for tok in args.normal.split(",")]
    h = Hyperplane(normal, parse_rational(args.offset))
    report = path_crossings(ps, h)
    within = report.count <= ps.dim
    record = ReportRecord(
        command="crossings",
        inputs={"pointset": ps, "normal": normal, "offset": h.offset},
        claim=CLAIM_CROSSINGS,
        outcome={
            "count": report.count,
            "edges": list(report.edges),
            "bound": ps.dim,
            "within_bound": within,
        },
        seed=args.seed,
    )
    return [record], not within


def _cmd_intersect(args):
    ps = _load_pointset(args.pointset)
    partition = _partition_for(args, len(ps))
    blocks = _blocks_points(ps, partition)
    outcome = hulls_common_point(blocks, ps.dim)
    replayed = verify_outcome(blocks, outcome, ps.dim)
    payload = outcome_payload(blocks, ps.dim, outcome)
    failed = not replayed
    if args.expect is not None:
        failed = failed or (outcome.status != args.expect)
    record = ReportRecord(
        command="intersect",
        inputs={"pointset": ps, "partition": list(partition.labels)},
        claim="Intersection",
        outcome={
            "status": outcome.status,
            "replayed": replayed,
            "expected": args.expect,
        },
        certificate=payload,
        seed=args.seed,
    )
    return [record], failed


def _cmd_tolerance(args):
    ps = _load_pointset(args.pointset)
    if args.sandwich:
        if args.r is None:
            raise InputError("--sandwich needs -r")
        rep = check_tolerance_sandwich(ps, args.r)
        record = ReportRecord(
            command="tolerance",
            inputs={"pointset": ps, "mode": "sandwich", "r": args.r},
            claim=CLAIM_SANDWICH_UPPER,
            outcome={
                "t_value": rep.t_value,
                "lower_bound": rep.lower_bound,
                "upper_bound": rep.upper_bound,
                "lower_ok": rep.lower_ok,
                "upper_ok": rep.upper_ok,
            },
            seed=args.seed,
        )
        return [record], not (rep.lower_ok and rep.upper_ok)
    if args.set_mode:
        if args.r is None:
            raise InputError("--set needs -r")
        report, partition = set_tolerance(ps, args.r, budget=args.budget)
        mode = "set"
    else:
        partition = _partition_for(args, len(ps))
        report = partition_tolerance(ps, partition, budget=args.budget)
        mode = "partition"
    record = ReportRecord(
        command="tolerance",
        inputs={
            "pointset": ps,
            "mode": mode,
            "r": partition.r,
            "partition": list(partition.labels),
            "budget": args.budget,
        },
        claim="Tolerance",
        outcome={
            "value": report.value,
            "breaking_set": list(report.breaking_set) if report.breaking_set else None,
            "exhausted": report.exhausted,
            "partition": list(partition.labels),
        },
        seed=args.seed,
    )
    return [record], False


def _cmd_bounds(args):
    if args.kind == "lemma32":
        value = alternating_bound(args.dim, args.r)
        claim = CLAIM_ALTERNATING_BOUND
        inputs = {"kind": args.kind, "dim": args.dim, "r": args.r}
    elif args.kind == "even-d":
        value = alternating_bound_even(args.dim, args.r)
        claim = CLAIM_EVEN_BOUND
        inputs = {"kind": args.kind, "dim": args.dim, "r": args.r}
    else:  # prop41
        if args.n is None:
            raise InputError("prop41 bound needs -n")
        value = tolerance_upper_bound(args.n, args.dim, args.r)
        claim = CLAIM_TOLERANCE_CAP
        inputs = {"kind": args.kind, "n": args.n, "dim": args.dim, "r": args.r}
    record = ReportRecord(
        command="bounds", inputs=inputs, claim=claim, outcome={"value": value},
        seed=args.seed,
    )
    return [record], False


def _strategy_from(args) -> SearchStrategy:
    kwargs = {"kind": args.strategy, "seed": args.seed or 0}
    if args.cluster_count is not None:
        kwargs["cluster_count"] = args.cluster_count
    if args.spread is not None:
        kwargs["spread"] = args.spread
    if args.denominator_bound is not None:
        kwargs["denominator_bound"] = args.denominator_bound
    if args.grid_step is not None:
        kwargs["grid_step"] = parse_rational(args.grid_step)
    return SearchStrategy(**kwargs)


def _strategy_fingerprint(strategy: SearchStrategy, budget: int) -> Dict:
    return {
        "kind": strategy.kind,
        "seed": strategy.seed,
        "cluster_count": strategy.cluster_count,
        "spread": strategy.spread,
        "epsilon": format_rational(strategy.epsilon),
        "grid_step": format_rational(strategy.grid_step),
        "denominator_bound": strategy.denominator_bound,
        "value_bound": strategy.value_bound,
        "budget": budget,
    }


def _scan_record(args, strategy, budget, n, result, fingerprint) -> ReportRecord:
    inputs = {"d": args.dim, "r": args.r, "n": n, "strategy": fingerprint}
    if isinstance(result, Counterexample):
        X = moment_points(MomentSpec(result.dim, result.alphas))
        blocks = searchmod.alternating_blocks(X, result.r)
        payload = outcome_payload(blocks, result.dim, result.outcome)
        outcome = {
            "found": True,
            "alphas": [format_rational(a) for a in result.alphas],
            "exact": args.dim == 1,
        }
        return ReportRecord(
            command="search-c", inputs=inputs, claim=CLAIM_SCAN,
            outcome=outcome, certificate=payload, seed=strategy.seed,
        )
    outcome = {"found": False, "tried": result.tried, "exact": result.exact}
    return ReportRecord(
        command="search-c", inputs=inputs, claim=CLAIM_SCAN,
        outcome=outcome, seed=strategy.seed,
    )


def _load_resume(args, fingerprint) -> Dict[int, object]:
    resume: Dict[int, object] = {}
    path = Path(args.out) if args.out else None
    if not path or not path.exists():
        return resume
    for record in load_records(path.read_text()):
        if record.command != "search-c":
            continue
        inputs = record.inputs
        if (
            inputs.get("d") != args.dim
            or inputs.get("r") != args.r
            or inputs.get("strategy") != jsonable(fingerprint)
        ):
            continue
        n = inputs.get("n")
        if record.outcome.get("found"):
            _, dim, outcome = payload_outcome(record.certificate)
            alphas = tuple(parse_rational(a) for a in record.outcome["alphas"])
            resume[n] = Counterexample(dim=dim, r=args.r, alphas=alphas, outcome=outcome)
        else:
            resume[n] = NoneFound(
                dim=args.dim, r=args.r, n=n,
                tried=record.outcome.get("tried", 0),
                exact=record.outcome.get("exact", False),
            )
    return resume


def _cmd_search_c(args):
    strategy = _strategy_from(args)
    budget = args.budget if args.budget is not None else 1000
    fingerprint = _strategy_fingerprint(strategy, budget)
    resume = _load_resume(args, fingerprint)
    records: List[ReportRecord] = []
    new_ns = []
    scan_start = time.perf_counter()

    def on_result(n, result):
        new_ns.append(n)
        record = _scan_record(args, strategy, budget, n, result, fingerprint)
        record.timing = round(time.perf_counter() - scan_start, 6)
        records.append(record)
        # flush each completed n immediately so interrupted scans resume
        if args.out:
            with open(args.out, "a") as fh:
                fh.write(record.to_json_line() + "\n")
            record.persisted = True

    result = scan_c_lower(
        args.dim,
        args.r,
        range(args.n_from, args.n_to + 1),
        strategy=strategy,
        budget=budget,
        resume=resume,
        on_result=on_result,
    )
    summary = ReportRecord(
        command="search-c-summary",
        inputs={"d": args.dim, "r": args.r, "n_from": args.n_from,
                "n_to": args.n_to, "strategy": fingerprint},
        claim=CLAIM_SCAN,
        outcome={
            "per_n": {
                str(n): isinstance(res, Counterexample)
                for n, res in sorted(result.results.items())
            },
            "lower_bound": result.lower_bound,
            "resumed": sorted(set(result.results) - set(new_ns)),
        },
        seed=strategy.seed,
    )
    records.append(summary)
    return records, False


def _cmd_t_line(args):
    value = t_line(args.n, args.r)
    record = ReportRecord(
        command="t-line",
        inputs={"n": args.n, "r": args.r},
        claim=CLAIM_LINE_TIGHT,
        outcome={"value": value},
        seed=args.seed,
    )
    return [record], False


def _cmd_n_line(args):
    value = n_line(args.t, args.r)
    oracle = n_line_formula(args.t, args.r)
    growth_ok = check_growth_inequality(1, args.r, args.t, value)
    record = ReportRecord(
        command="n-line",
        inputs={"t": args.t, "r": args.r},
        claim=CLAIM_GROWTH,
        outcome={
            "value": value,
            "oracle": oracle,
            "match": value == oracle,
            "growth_inequality_ok": growth_ok,
        },
        seed=args.seed,
    )
    return [record], not (value == oracle and growth_ok)


def _cmd_verify_sixteen(args):
    eps = parse_rational(args.epsilon) if args.epsilon else searchmod.DEFAULT_EPSILON
    example, working_eps = verified_sixteen_point_example(eps)
    X = moment_points(MomentSpec(example.dim, example.alphas))
    blocks = searchmod.alternating_blocks(X, example.r)
    payload = outcome_payload(blocks, example.dim, example.outcome)
    replayed = verify_outcome(blocks, example.outcome, example.dim)
    record = ReportRecord(
        command="verify-figure2",
        inputs={"epsilon": working_eps},
        claim=CLAIM_SIXTEEN,
        outcome={
            "status": example.outcome.status,
            "replayed": replayed,
            "n": example.n,
            "alphas": [format_rational(a) for a in example.alphas],
            "c_lower_bound": {"d": 3, "r": 4, "at_least": example.n + 1},
        },
        certificate=payload,
        seed=args.seed,
    )
    return [record], not replayed


def _cmd_verify(args):
    records_in = load_records(_read_text(args.report))
    results = []
    failed = False
    for i, rec in enumerate(records_in, start=1):
        verdict = replay_record(rec)
        results.append({"record": i, "command": rec.command, "replayed": verdict})
        if verdict is False:
            failed = True
    record = ReportRecord(
        command="verify",
        inputs={"report": args.report, "records": len(records_in)},
        claim="Replay",
        outcome={"results": results, "all_ok": not failed},
        seed=None,
    )
    return [record], failed


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="search seed")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="candidate budget")
    common.add_argument("--format", choices=("json", "table"),
                        default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="append records to this file")
    parser = argparse.ArgumentParser(
        prog="tverlab",
        description="Exact-arithmetic workbench for tolerant Tverberg "
        "partitions of order-type homogeneous sets.",
        parents=[common],
    )
    # SUPPRESS defaults everywhere: the subparser parses into a fresh
    # namespace and would otherwise overwrite globals given before the
    # subcommand; main() fills the gaps after parsing
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", parents=[common], help="moment-curve points from parameters")
    p.add_argument("-d", "--dim", type=int, required=True)
    p.add_argument("--alphas", help="comma-separated rationals")
    p.add_argument("--alphas-file", help="whitespace-separated rationals")
    p.add_argument("--pointset-out", help="write the otps file here")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("homog", parents=[common], help="order-type homogeneity check")
    p.add_argument("pointset", help="otps file ('-' for stdin)")
    p.add_argument("--expect", choices=("homogeneous", "violation"))
    p.set_defaults(handler=_cmd_homog)

    p = sub.add_parser("facets", parents=[common], help="cyclic-polytope facets (Gale evenness)")
    p.add_argument("-d", "--dim", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(handler=_cmd_facets)

    p = sub.add_parser("neighborly", parents=[common], help="floor(d/2)-neighborliness check")
    p.add_argument("-d", "--dim", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(handler=_cmd_neighborly)

    p = sub.add_parser("crossings", parents=[common], help="path-hyperplane crossing count")
    p.add_argument("pointset")
    p.add_argument("--normal", required=True, help="comma-separated rationals")
    p.add_argument("--offset", required=True)
    p.set_defaults(handler=_cmd_crossings)

    p = sub.add_parser("intersect", parents=[common], help="common point of block hulls")
    p.add_argument("pointset")
    p.add_argument("--blocks", help="e.g. '1,4;2,5;3'")
    p.add_argument("--alternating", type=int, metavar="R")
    p.add_argument("--expect", choices=("feasible", "infeasible"))
    p.set_defaults(handler=_cmd_intersect)

    p = sub.add_parser("tolerance", parents=[common], help="partition or set tolerance")
    p.add_argument("pointset")
    p.add_argument("--blocks")
    p.add_argument("--alternating", type=int, metavar="R")
    p.add_argument("--set", dest="set_mode", action="store_true",
                   help="maximize over all r-partitions")
    p.add_argument("--sandwich", action="store_true",
                   help="check the homogeneous-set tolerance sandwich")
    p.add_argument("-r", type=int, help="number of blocks for --set/--sandwich")
    p.set_defaults(handler=_cmd_tolerance)

    p = sub.add_parser("bounds", parents=[common], help="threshold/tolerance bound formulas")
    p.add_argument("--kind", choices=("lemma32", "even-d", "prop41"), required=True)
    p.add_argument("-d", "--dim", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-n", type=int)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("search-c", parents=[common], help="scan n for alternating counterexamples")
    p.add_argument("-d", "--dim", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--strategy", choices=("clustered", "grid", "random-rational"),
                   default="clustered")
    p.add_argument("--cluster-count", type=int)
    p.add_argument("--spread", type=int)
    p.add_argument("--denominator-bound", type=int)
    p.add_argument("--grid-step")
    p.set_defaults(handler=_cmd_search_c)

    p = sub.add_parser("t-line", parents=[common], help="exact t(n, 1, r)")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.set_defaults(handler=_cmd_t_line)

    p = sub.add_parser("n-line", parents=[common], help="least n on the line with tolerance t")
    p.add_argument("-t", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.set_defaults(handler=_cmd_n_line)

    p = sub.add_parser("verify-figure2", parents=[common],
                       help="verify the 16-point witness for c(3,4) >= 17")
    p.add_argument("--epsilon", help="starting perturbation step")
    p.set_defaults(handler=_cmd_verify_sixteen)

    p = sub.add_parser("verify", parents=[common], help="replay certificates in a report file")
    p.add_argument("report", help="JSON-lines report ('-' for stdin)")
    p.set_defaults(handler=_cmd_verify)

    return parser


def _render_table(record: ReportRecord) -> str:
    lines = [f"== {record.command} (claim: {record.claim})"]
    for key, value in record.outcome.items():
        lines.append(f"  {key}: {jsonable(value)}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("seed", None), ("budget", None),
                          ("format", "json"), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    start = time.perf_counter()
    try:
        records, failed = args.handler(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - start
    for record in records:
        if record.timing is None:
            record.timing = round(elapsed, 6)
    lines = [r.to_json_line() for r in records]
    if args.out:
        with open(args.out, "a") as fh:
            for record, line in zip(records, lines):
                if not record.persisted:
                    fh.write(line + "\n")
    if args.format == "table":
        for record in records:
            print(_render_table(record))
    else:
        for line in lines:
            print(line)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
