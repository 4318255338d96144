"""Command-line interface.

Four subcommands: ``assign`` computes PS/RSD matrices for a profile file,
``audit`` bundles the dominance, envy, and manipulability analysis of one
profile, ``experiment`` runs an (n, m) grid to CSV, and ``plot`` renders a
CSV into an SVG figure. Exit codes: 0 success, 1 usage or parse error,
2 a combinatorial cap was exceeded, 3 I/O failure.
"""

import argparse
import csv
import io
import json
import random
import sys

from .dominance import Verdict, envy_report, profile_dominance, row_verdicts
from .experiments import (
    DEFAULT_AUTO_EXHAUSTIVE_LIMIT,
    CellConfig,
    envy_distribution_to_csv,
    grid_to_csv,
    run_grid,
)
from .manipulation import ps_manipulability
from .mechanisms import ps, rsd
from .model import (
    AssignmentMatrix,
    CapExceededError,
    ProfileParseError,
    load_profile,
)
from .plotting import FIGURE_KINDS, CsvSchemaError, render_figure
from .rational import decimal_str, parse_rat, rat_str

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_IO = 3

MECHANISMS = {"ps": ps, "rsd": rsd}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; remap to the usage code 1.
    def error(self, message):
        raise _UsageError(message)


def _entry_str(value, decimal: int | None) -> str:
    if decimal is None:
        return rat_str(value)
    return decimal_str(value, decimal)


def format_matrix_table(matrix: AssignmentMatrix, object_names, decimal=None) -> str:
    """Aligned text table, agents as 1-based rows and objects as columns."""
    header = ["agent"] + list(object_names)
    body = [
        [str(i + 1)] + [_entry_str(x, decimal) for x in row]
        for i, row in enumerate(matrix.rows)
    ]
    widths = [max(len(r[c]) for r in [header] + body) for c in range(len(header))]
    lines = [
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths))
        for row in [header] + body
    ]
    return "\n".join(lines)


def matrices_to_csv(matrices, object_names, decimal=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["mechanism", "agent"] + list(object_names))
    for name, matrix in matrices.items():
        for i, row in enumerate(matrix.rows):
            writer.writerow([name, str(i + 1)] + [_entry_str(x, decimal) for x in row])
    return buf.getvalue()


def matrices_to_json(matrices, object_names) -> str:
    """Exact JSON serialization ('p/q' strings); re-parseable losslessly."""
    doc = {
        "n": next(iter(matrices.values())).n,
        "m": len(object_names),
        "objects": list(object_names),
        "assignments": {
            name: [[rat_str(x) for x in row] for row in matrix.rows]
            for name, matrix in matrices.items()
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def matrices_from_json(text: str):
    """Parse the ``assign --format json`` document back into matrices."""
    doc = json.loads(text)
    return {
        name: AssignmentMatrix(
            tuple(tuple(parse_rat(x) for x in row) for row in rows)
        )
        for name, rows in doc["assignments"].items()
    }


def _misreport_names(profile, witness) -> str:
    names = " ".join(profile.object_names[j] for j in witness.misreport)
    return f"agent {witness.agent + 1} → ({names})"


def _dominance_summary(ps_matrix, rsd_matrix, profile) -> list:
    lines = []
    if ps_matrix.rows == rsd_matrix.rows:
        lines.append("PS = RSD")
        return lines
    phrase = {
        Verdict.FIRST_DOMINATES: "PS {kind}-dominates RSD",
        Verdict.SECOND_DOMINATES: "RSD {kind}-dominates PS",
        Verdict.INCOMPARABLE: "{kind}-incomparable",
        Verdict.EQUAL: "PS = RSD",
    }
    parts = []
    for kind in ("ld", "sd"):
        verdict = profile_dominance(ps_matrix, rsd_matrix, profile, kind)
        parts.append(phrase[verdict].format(kind=kind))
    lines.append("; ".join(parts))
    agent_word = {
        Verdict.EQUAL: "equal",
        Verdict.FIRST_DOMINATES: "prefers PS",
        Verdict.SECOND_DOMINATES: "prefers RSD",
        Verdict.INCOMPARABLE: "sd-incomparable",
    }
    verdicts = row_verdicts(ps_matrix, rsd_matrix, profile, "sd")
    lines.append(
        "per-agent (sd): "
        + "; ".join(f"agent {i + 1}: {agent_word[v]}" for i, v in enumerate(verdicts))
    )
    return lines


def _envy_summary(name, matrix, profile) -> str:
    report = envy_report(matrix, profile)
    weak = [str(i + 1) for i, flag in enumerate(report.weakly_envious) if flag]
    lexi = [str(i + 1) for i, flag in enumerate(report.ld_envious) if flag]
    weak_part = f"weakly envious agents: {', '.join(weak)}" if weak else "sd-envyfree"
    ld_part = f"ld-envious agents: {', '.join(lexi)}" if lexi else "ld-envyfree"
    return f"{name} envy: {weak_part}; {ld_part}"


def cmd_assign(args) -> int:
    profile = load_profile(args.profile)
    names = (
        ["ps", "rsd"] if args.mechanism == "both" else [args.mechanism]
    )
    matrices = {name: MECHANISMS[name](profile) for name in names}
    if args.format == "json":
        sys.stdout.write(matrices_to_json(matrices, profile.object_names))
    elif args.format == "csv":
        sys.stdout.write(matrices_to_csv(matrices, profile.object_names, args.decimal))
    else:
        blocks = []
        for name, matrix in matrices.items():
            blocks.append(
                f"{name.upper()} assignment\n"
                + format_matrix_table(matrix, profile.object_names, args.decimal)
            )
        sys.stdout.write("\n\n".join(blocks) + "\n")
    return EXIT_OK


def cmd_audit(args) -> int:
    profile = load_profile(args.profile)
    ps_matrix = ps(profile)
    rsd_matrix = rsd(profile)
    out = []
    out.append(f"profile: n={profile.n} m={profile.m}")
    for i in range(profile.n):
        out.append(f"  agent {i + 1}: {' '.join(profile.pref_names(i))}")
    out.append("")
    out.append("PS assignment")
    out.append(format_matrix_table(ps_matrix, profile.object_names))
    out.append("")
    out.append("RSD assignment")
    out.append(format_matrix_table(rsd_matrix, profile.object_names))
    out.append("")
    out.extend(_dominance_summary(ps_matrix, rsd_matrix, profile))
    out.append(_envy_summary("RSD", rsd_matrix, profile))
    out.append(_envy_summary("PS", ps_matrix, profile))
    try:
        report = ps_manipulability(
            profile,
            misreport_samples=args.misreport_samples,
            rng=None if args.misreport_samples is None else random.Random(args.seed),
            misreport_cap=args.cap,
        )
    except CapExceededError as exc:
        sys.stdout.write("\n".join(out) + "\n")
        sys.stderr.write(
            f"manipulability scan skipped: {exc}\n"
            "hint: rerun with --misreport-samples K or a larger --cap\n"
        )
        return EXIT_CAP
    qualifier = "" if report.exhaustive else " (sampled lower bound)"
    if report.sd_manipulable:
        out.append(
            f"PS sd-manipulable; witness {_misreport_names(profile, report.sd_witness)}{qualifier}"
        )
    elif report.ld_manipulable:
        out.append(
            f"PS ld-manipulable; witness {_misreport_names(profile, report.ld_witness)}{qualifier}"
        )
    if report.manipulable and not report.sd_manipulable:
        out.append(
            f"PS manipulable; witness {_misreport_names(profile, report.manipulable_witness)}{qualifier}"
        )
    if not report.manipulable:
        out.append(f"PS not manipulable{qualifier}")
    envy = envy_report(rsd_matrix, profile)
    if (
        ps_matrix.rows == rsd_matrix.rows
        and not report.manipulable
        and not any(envy.weakly_envious)
    ):
        out.append("no findings")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def _parse_range(text: str):
    values = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values or any(v < 1 for v in values):
        raise ValueError(f"invalid range {text!r}")
    return values


def cmd_experiment(args) -> int:
    try:
        n_values = _parse_range(args.n)
        m_values = _parse_range(args.m)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    if args.exhaustive and args.samples is not None:
        raise _UsageError("--exhaustive and --samples are mutually exclusive")
    mode = "exhaustive" if args.exhaustive else ("sampled" if args.samples else "auto")
    template = CellConfig(
        n=n_values[0],
        m=m_values[0],
        mode=mode,
        samples=args.samples or 1000,
        master_seed=args.seed,
        misreport_samples=args.misreport_samples,
        enumeration_cap=args.cap,
        auto_exhaustive_limit=min(args.cap, DEFAULT_AUTO_EXHAUSTIVE_LIMIT),
    )
    print(f"master seed: {args.seed}")
    results = run_grid(n_values, m_values, template, threads=args.threads)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write(grid_to_csv(results))
    print(f"wrote {args.output}")
    failed = [r for r in results if r.error is not None]
    for result in failed:
        sys.stderr.write(
            f"cell ({result.config.n},{result.config.m}) failed: {result.error}\n"
        )
    if args.envy_dist:
        per_n = {
            r.metrics.n: r.metrics.envy_distribution
            for r in results
            if r.metrics is not None and r.metrics.n == r.metrics.m
        }
        with open(args.envy_dist, "w", encoding="utf-8", newline="") as fh:
            fh.write(envy_distribution_to_csv(per_n))
        print(f"wrote {args.envy_dist}")
    return EXIT_CAP if failed else EXIT_OK


def cmd_plot(args) -> int:
    render_figure(args.figure, args.csv, args.output)
    print(f"wrote {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="randassign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_assign = sub.add_parser("assign", help="compute assignment matrices for a profile")
    p_assign.add_argument("profile", help="profile file (text or JSON)")
    p_assign.add_argument("--mechanism", choices=["ps", "rsd", "both"], default="both")
    p_assign.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p_assign.add_argument(
        "--decimal", type=int, default=None, metavar="K",
        help="show K-digit decimals instead of exact p/q (table/csv only)",
    )
    p_assign.set_defaults(func=cmd_assign)

    p_audit = sub.add_parser("audit", help="dominance, envy, and manipulability report")
    p_audit.add_argument("profile", help="profile file (text or JSON)")
    p_audit.add_argument(
        "--misreport-samples", type=int, default=None, metavar="K",
        help="sample K misreports per agent instead of the exhaustive scan",
    )
    p_audit.add_argument("--seed", type=int, default=0, help="seed for sampled misreports")
    p_audit.add_argument(
        "--cap", type=int, default=5040, metavar="STATES",
        help="misreports-per-agent cap for the exhaustive scan",
    )
    p_audit.set_defaults(func=cmd_audit)

    p_exp = sub.add_parser("experiment", help="run an (n, m) grid of profile experiments")
    p_exp.add_argument("--n", required=True, help="agent counts, e.g. 3, 2..6, or 2,4,6")
    p_exp.add_argument("--m", required=True, help="object counts, same syntax")
    p_exp.add_argument("--samples", type=int, default=None, help="profiles per sampled cell")
    p_exp.add_argument(
        "--exhaustive", action="store_true",
        help="force exhaustive enumeration for every cell",
    )
    p_exp.add_argument("--seed", type=int, default=0, help="master seed (echoed for reruns)")
    p_exp.add_argument("--threads", type=int, default=1, help="worker processes")
    p_exp.add_argument(
        "--cap", type=int, default=100_000, metavar="STATES",
        help="max profiles for an exhaustive cell",
    )
    p_exp.add_argument(
        "--misreport-samples", type=int, default=None, metavar="K",
        help="sample K misreports per agent (manipulability becomes a lower bound)",
    )
    p_exp.add_argument("-o", "--output", required=True, help="cell metrics CSV path")
    p_exp.add_argument(
        "--envy-dist", default=None, metavar="PATH",
        help="also dump the n=m envy distributions to this CSV",
    )
    p_exp.set_defaults(func=cmd_experiment)

    p_plot = sub.add_parser("plot", help="render an experiment CSV to an SVG figure")
    p_plot.add_argument("csv", help="CSV produced by the experiment command")
    p_plot.add_argument("--figure", choices=list(FIGURE_KINDS), required=True)
    p_plot.add_argument("-o", "--output", required=True, help="output SVG path")
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ProfileParseError as exc:
        sys.stderr.write(f"profile error: {exc}\n")
        return EXIT_USAGE
    except (CsvSchemaError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except CapExceededError as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
