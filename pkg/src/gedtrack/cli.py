"""Command line: ``gedtrack run`` for the pipeline, ``gedtrack report ...`` for analyses.

Exit codes: 0 success, 1 input error, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys

from . import io
from .errors import ConfigError, GedTrackError
from .importance import MIN_NODES, SpConfig, group_importance
from .pipeline import PipelineConfig, load_network, run_pipeline
from .reports import (
    SWEEP_EVENT_COLUMNS, evolution_table, report_compare, report_group_evolution,
    report_inclusion, report_migration,
)

EXIT_OK, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _group_ref(text):
    try:
        frame, gid = text.split(":")
        return int(frame), int(gid)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected FRAME:GROUP, got {text!r}") from None


def _add_run(sub):
    p = sub.add_parser("run", help="group, score and track a temporal network")
    p.add_argument("--config", help="JSON file with pipeline settings; flags override it")
    p.add_argument("--edges", action="append", help="edge file (repeat for one file per timeframe)")
    p.add_argument("--edges-dialect", choices=io.DIALECTS)
    p.add_argument("--window-len", type=int, help="cut a timestamped edge file into windows of this length")
    p.add_argument("--step", type=int, help="window start offset")
    p.add_argument("--groups", help="group file (group, member, timeframe)")
    p.add_argument("--joint-groups", help="joint-frame group file for palla matching")
    p.add_argument("--grouping", choices=("cpm", "louvain", "pregrouped"))
    p.add_argument("--k", type=int, help="clique size for cpm")
    p.add_argument("--measure", choices=("sp", "cd", "cc", "cb", "none"))
    p.add_argument("--epsilon", type=float, help="social position damping")
    p.add_argument("--tracker", action="append", choices=("ged", "asur", "palla"),
                   help="repeat to run several trackers")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--form-dissolve", type=float)
    p.add_argument("--sweep", help="threshold grid for alpha and beta, e.g. 50:100:10")
    p.add_argument("--kappa", type=float, help="asur overlap threshold")
    p.add_argument("--out", help="output directory")


def _add_reports(sub):
    rep = sub.add_parser("report", help="analyses over inputs and results").add_subparsers(dest="report", required=True)

    def data_args(p):
        p.add_argument("--groups", required=True)
        p.add_argument("--edges", action="append")
        p.add_argument("--edges-dialect", choices=io.DIALECTS, default="tab-point")
        p.add_argument("--measure", choices=("sp", "cd", "cc", "cb", "none"), default="sp")

    p = rep.add_parser("inclusion", help="inclusion detail for one pair of groups")
    data_args(p)
    p.add_argument("--group1", type=_group_ref, required=True, metavar="FRAME:GROUP")
    p.add_argument("--group2", type=_group_ref, required=True, metavar="FRAME:GROUP")

    p = rep.add_parser("migration", help="where members of a group went next")
    data_args(p)
    p.add_argument("--events", required=True, help="events.tsv from a run")
    p.add_argument("--group", type=_group_ref, required=True, metavar="FRAME:GROUP")

    p = rep.add_parser("compare", help="events found by one run and not the other")
    p.add_argument("a")
    p.add_argument("b")

    p = rep.add_parser("evolution", help="lineage of one group or the whole run")
    p.add_argument("--events", required=True)
    p.add_argument("--group", type=_group_ref, metavar="FRAME:GROUP")
    p.add_argument("--alpha", type=float, help="pick one run out of a sweep events file")
    p.add_argument("--beta", type=float)
    p.add_argument("--counts", help="write per-threshold event counts as CSV here")

    p = rep.add_parser("convert", help="rewrite an edge file in another dialect")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--from", dest="src_dialect", choices=io.DIALECTS, default="semicolon-comma")
    p.add_argument("--to", dest="dst_dialect", choices=io.DIALECTS, default="tab-point")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gedtrack", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_run(sub)
    _add_reports(sub)
    return parser


def _cmd_run(args):
    overrides = dict(
        edges=args.edges, edges_dialect=args.edges_dialect, window_len=args.window_len, step=args.step,
        groups=args.groups, joint_groups=args.joint_groups, grouping=args.grouping, k=args.k,
        measure=args.measure, epsilon=args.epsilon, trackers=args.tracker, alpha=args.alpha,
        beta=args.beta, form_dissolve=args.form_dissolve, sweep=args.sweep, kappa=args.kappa, out=args.out,
    )
    written = run_pipeline(PipelineConfig.load(args.config, **overrides))
    for name, path in written.items():
        print(f"{name}\t{path}")


def _load_data(args):
    grouping = io.parse_groups(args.groups)
    tsn = None
    if args.edges:
        tsn = load_network(PipelineConfig(edges=args.edges, edges_dialect=args.edges_dialect))
    return tsn, grouping


def _importance(tsn, group, measure):
    if tsn is None or measure == "none" or len(group) < MIN_NODES[measure]:
        return None
    vec = group_importance(tsn.frame(group.frame_index), group, measure, SpConfig())
    return vec if vec.total() > 0 else None


def _write_rows(rows):
    writer = csv.writer(sys.stdout, delimiter="\t", lineterminator="\n")
    writer.writerows(rows)


def _cmd_inclusion(args):
    tsn, grouping = _load_data(args)
    g1, g2 = grouping.get(*args.group1), grouping.get(*args.group2)
    r = report_inclusion(g1, g2, _importance(tsn, g1, args.measure), _importance(tsn, g2, args.measure))
    _write_rows([
        ["field", "group1", "group2"],
        ["group", f"{r.frame1}:{r.group1}", f"{r.frame2}:{r.group2}"],
        ["inclusion", io.pct(r.inclusion12), io.pct(r.inclusion21)],
        ["size", r.size1, r.size2],
        ["importance_total", io.score(r.importance_total1), io.score(r.importance_total2)],
        ["importance_shared", io.score(r.importance_shared1), io.score(r.importance_shared2)],
        ["core", " ".join(map(str, r.core1)), " ".join(map(str, r.core2))],
        ["core_importance", io.score(r.core_importance1), io.score(r.core_importance2)],
        ["intersection", " ".join(map(str, r.intersection)), ""],
    ])


def _cmd_migration(args):
    tsn, grouping = _load_data(args)
    group = grouping.get(*args.group)
    nxt = grouping.groups(group.frame_index + 1)
    importances = {}
    for g in (group, *nxt):
        vec = _importance(tsn, g, args.measure)
        if vec is not None:
            importances[g.key] = vec
    r = report_migration(group, io.read_events(args.events), grouping, importances)
    avg = lambda v: "" if v is None else f"{v:.2f}"  # noqa: E731
    _write_rows([
        ["group", "timeframe", "size", "core_size", "successors", "migrated",
         "avg_rank_before", "avg_rank_after", "note"],
        [r.group, r.frame, r.size, r.core_size,
         " ".join(f"{gid}({size})" for gid, size in r.successors), r.migrated,
         avg(r.avg_rank_before), avg(r.avg_rank_after), r.note],
    ])


def _cmd_compare(args):
    r = report_compare(io.read_table(args.a), io.read_table(args.b))

    def ref(key):
        f1, g1, f2, g2 = key
        return ("" if g1 is None else g1), f1, ("" if g2 is None else g2), f2

    rows = [["section", "group1", "timeframe1", "group2", "timeframe2", "events_a", "events_b"]]
    rows += [["both", *ref(k), ",".join(a), ",".join(b)] for k, a, b in r.both]
    rows += [["only_a", *ref(k), ",".join(a), ""] for k, a in r.only_a]
    rows += [["only_b", *ref(k), "", ",".join(b)] for k, b in r.only_b]
    _write_rows(rows)


def _cmd_evolution(args):
    events = io.read_events(args.events)
    if args.counts:
        counts = {}
        for e in events:
            cell = counts.setdefault((e.thresholds.alpha, e.thresholds.beta), dict.fromkeys(SWEEP_EVENT_COLUMNS, 0))
            name = next(k for k, v in SWEEP_EVENT_COLUMNS.items() if v == e.event)
            cell[name] += 1
        rows = [[f"{a:g}", f"{b:g}", *c.values(), sum(c.values())] for (a, b), c in sorted(counts.items())]
        io.write_table(args.counts, io.SWEEP_COLUMNS, rows, delimiter=",")
    runs = sorted({(e.thresholds.alpha, e.thresholds.beta) for e in events})
    if args.alpha is not None or args.beta is not None:
        pick = (args.alpha, args.beta)
    elif len(runs) > 1:
        raise ConfigError("events file holds several threshold runs; choose one with --alpha and --beta")
    else:
        pick = runs[0] if runs else (None, None)
    events = [e for e in events if (e.thresholds.alpha, e.thresholds.beta) == pick]
    if args.group:
        frame, gid = args.group
        ev = report_group_evolution(events, frame, gid)
        rows = [["direction", "event_type", "group1", "timeframe1", "group2", "timeframe2"]]
        for direction, recs in (("backward", ev.backward), ("forward", ev.forward)):
            for e in recs:
                rows.append([direction, str(e.event), "" if e.group1 is None else e.group1, e.frame1,
                             "" if e.group2 is None else e.group2, e.frame2])
        _write_rows(rows)
        return
    header, rows = evolution_table(events)
    _write_rows([header, *rows])


def _cmd_convert(args):
    records = io.parse_edges(args.source, args.src_dialect)
    with open(args.target, "w", encoding="utf-8") as fh:
        fh.write(io.serialize_edges(records, args.dst_dialect))


COMMANDS = {
    "inclusion": _cmd_inclusion,
    "migration": _cmd_migration,
    "compare": _cmd_compare,
    "evolution": _cmd_evolution,
    "convert": _cmd_convert,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            _cmd_run(args)
        else:
            COMMANDS[args.report](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GedTrackError, OSError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
