"""Flat-file formats: edge lists, group lists and the tab-delimited result tables."""
from __future__ import annotations

import csv
import warnings
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation
from pathlib import Path
from typing import NamedTuple, Optional

from .errors import FormatError
from .ged import EventRecord, EventType, Thresholds
from .tsn import Group, Grouping, Interaction, TemporalNetwork, build_frame_graph

DIALECTS = ("semicolon-comma", "tab-point")
_WEIGHT_QUANTUM = Decimal("0.0001")


class EdgeFileRecord(NamedTuple):
    source: int
    target: int
    weight: float
    frame: Optional[int] = None


def _lines(source):
    """Yield ``(line_no, text)`` from a path or an open text file."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from enumerate(fh, start=1)
    else:
        yield from enumerate(source, start=1)


def _int(text, line, what):
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"{what} {text!r} is not an integer", line) from None


def round_weight(value) -> float:
    """Round half-up to 4 decimals on the decimal text, not the binary float."""
    if not isinstance(value, Decimal):
        value = Decimal(str(value))
    return float(value.quantize(_WEIGHT_QUANTUM, rounding=ROUND_HALF_UP))


def parse_edges(source, dialect: str = "tab-point") -> list:
    """Read ``from, to, weight[, frame]`` rows; weights are rounded to 4 decimals.

    ``semicolon-comma`` is the raw export (``4376;27588;0,0019...``),
    ``tab-point`` the converted form (``4376<TAB>27588<TAB>0.0019``).
    """
    if dialect not in DIALECTS:
        raise FormatError(f"unknown edge dialect {dialect!r}; expected one of {DIALECTS}")
    sep, decimal_sep = (";", ",") if dialect == "semicolon-comma" else ("\t", ".")
    records = []
    for line_no, raw in _lines(source):
        text = raw.rstrip("\r\n")
        if not text.strip():
            continue
        fields = [f.strip() for f in text.split(sep)]
        if len(fields) not in (3, 4):
            raise FormatError(f"expected 3 or 4 fields separated by {sep!r}, got {len(fields)}", line_no)
        src = _int(fields[0], line_no, "node id")
        dst = _int(fields[1], line_no, "node id")
        weight_text = fields[2]
        if decimal_sep == "," and "." in weight_text:
            raise FormatError(f"weight {weight_text!r} uses a decimal point in the comma dialect", line_no)
        if decimal_sep == "." and "," in weight_text:
            raise FormatError(f"weight {weight_text!r} uses a decimal comma in the point dialect", line_no)
        try:
            weight = Decimal(weight_text.replace(",", "."))
        except InvalidOperation:
            raise FormatError(f"weight {weight_text!r} is not a number", line_no) from None
        if not weight.is_finite():
            raise FormatError(f"weight {weight_text!r} is not finite", line_no)
        if weight < 0:
            raise FormatError(f"negative weight {weight_text}", line_no)
        if src == dst:
            raise FormatError(f"self-loop on node {src}", line_no)
        frame = _int(fields[3], line_no, "timeframe") if len(fields) == 4 else None
        records.append(EdgeFileRecord(src, dst, round_weight(weight), frame))
    return records


def serialize_edges(records, dialect: str = "tab-point") -> str:
    if dialect not in DIALECTS:
        raise FormatError(f"unknown edge dialect {dialect!r}")
    sep = ";" if dialect == "semicolon-comma" else "\t"
    out = []
    for r in records:
        weight = f"{r.weight:.4f}"
        if dialect == "semicolon-comma":
            weight = weight.replace(".", ",")
        fields = [str(r.source), str(r.target), weight]
        if r.frame is not None:
            fields.append(str(r.frame))
        out.append(sep.join(fields) + "\n")
    return "".join(out)


def parse_groups(source) -> Grouping:
    """Read ``group<TAB>member<TAB>timeframe`` rows into a :class:`Grouping`."""
    members = {}
    for line_no, raw in _lines(source):
        text = raw.rstrip("\r\n")
        if not text.strip():
            continue
        fields = text.split("\t")
        if len(fields) != 3:
            raise FormatError(f"expected 3 tab-separated fields, got {len(fields)}", line_no)
        gid, node, frame = (_int(f.strip(), line_no, name) for f, name in zip(fields, ("group id", "node id", "timeframe")))
        if frame < 1:
            raise FormatError(f"timeframe must be >= 1, got {frame}", line_no)
        members.setdefault((frame, gid), set()).add(node)
    return Grouping.from_groups(Group(gid, frozenset(m), frame) for (frame, gid), m in members.items())


def serialize_groups(grouping: Grouping) -> str:
    out = []
    for g in grouping:
        for node in sorted(g.members):
            out.append(f"{g.group_id}\t{node}\t{g.frame_index}\n")
    return "".join(out)


def network_from_records(records, default_frame: int = 1) -> TemporalNetwork:
    """Assemble frames from records that carry a frame column (or all in one frame)."""
    by_frame = {}
    for r in records:
        by_frame.setdefault(r.frame if r.frame is not None else default_frame, []).append(r)
    if not by_frame:
        return TemporalNetwork(())
    last = max(by_frame)
    return TemporalNetwork(tuple(build_frame_graph(by_frame.get(i, []), i) for i in range(1, last + 1)))


def interactions_from_records(records) -> list:
    """Treat the fourth column as an integer timestamp."""
    out = []
    for r in records:
        if r.frame is None:
            raise FormatError(f"edge {r.source}->{r.target} has no timestamp column")
        out.append(Interaction(r.source, r.target, r.weight, r.frame))
    return out


# --- result tables ---------------------------------------------------------

EVENT_COLUMNS = ["id_evolutions", "event_type", "group1", "timeframe1", "group2", "timeframe2",
                 "alpha", "beta", "threshold", "inclusion1", "inclusion2"]
ASUR_COLUMNS = ["id_evolutions", "event_type", "group1", "timeframe1", "group2", "timeframe2", "overlap"]
CONTAINED_COLUMNS = ["id_contained", "group_id", "timeframe", "group_joint", "timeframe_joint"]
MATCHED_COLUMNS = ["id_matched", "group1", "timeframe1", "group2", "timeframe2", "overlap", "group_joint"]
IMPORTANCE_COLUMNS = ["group_id", "node_id", "score", "ranking", "timeframe", "measure"]
SWEEP_COLUMNS = ["alpha", "beta", "form", "dissolve", "shrink", "growth", "continue", "split", "merge", "total"]
CHAIN_COLUMNS = ["chain_id", "step", "event_type", "group1", "timeframe1", "group2", "timeframe2"]


def pct(value) -> str:
    return "" if value is None else f"{value:.2f}"


def score(value) -> str:
    return f"{value:.6f}"


def _blank(value) -> str:
    return "" if value is None else str(value)


def write_table(path, columns, rows, delimiter="\t"):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def read_table(path, delimiter="\t") -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh, delimiter=delimiter))


def event_rows(events) -> list:
    return [
        [i, str(e.event), _blank(e.group1), e.frame1, _blank(e.group2), e.frame2,
         f"{e.thresholds.alpha:g}", f"{e.thresholds.beta:g}", e.thresholds.label, pct(e.i12), pct(e.i21)]
        for i, e in enumerate(events, start=1)
    ]


def asur_rows(events) -> list:
    return [
        [i, e.event, _blank(e.group1), e.frame1, _blank(e.group2), e.frame2, pct(e.overlap)]
        for i, e in enumerate(events, start=1)
    ]


def contained_rows(records) -> list:
    return [
        [i, c.group_id, c.frame, c.joint_group, f"{c.joint_frame}-{c.joint_frame + 1}"]
        for i, c in enumerate(records, start=1)
    ]


def matched_rows(matches) -> list:
    return [
        [i, m.group1, m.frame1, m.group2, m.frame2, pct(m.overlap), m.joint_group]
        for i, m in enumerate(matches, start=1)
    ]


def chain_rows(chains) -> list:
    rows = []
    for cid, chain in enumerate(chains, start=1):
        for step, r in enumerate(chain.records, start=1):
            rows.append([cid, step, str(r.event), _blank(r.group1), r.frame1, _blank(r.group2), r.frame2])
    return rows


def importance_rows(vectors) -> list:
    """``vectors`` maps ``(frame, group_id)`` to an ImportanceVector."""
    rows = []
    for (frame, gid), vec in sorted(vectors.items()):
        for node in sorted(vec.scores, key=lambda n: (vec.ranking[n], n)):
            rows.append([gid, node, score(vec.scores[node]), vec.ranking[node], frame, vec.measure])
    return rows


def _opt_int(text):
    return int(text) if text not in ("", None) else None


def read_events(path) -> list:
    """Load an events table back into :class:`EventRecord` objects.

    Inclusions come back rounded to the two decimals written to the file.
    """
    events = []
    for row in read_table(path):
        try:
            alpha, beta, fd = (float(x) for x in row["threshold"].split("/"))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                th = Thresholds(alpha, beta, fd)
            events.append(EventRecord(
                EventType(row["event_type"]),
                _opt_int(row["group1"]), int(row["timeframe1"]),
                _opt_int(row["group2"]), int(row["timeframe2"]),
                float(row["inclusion1"] or 0), float(row["inclusion2"] or 0), th,
            ))
        except (KeyError, ValueError) as exc:
            raise FormatError(f"{path}: bad event row {row!r}: {exc}") from None
    return events
