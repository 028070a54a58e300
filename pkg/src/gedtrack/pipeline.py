"""End-to-end run: load files, build groups, score members, track, write tables."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from . import io
from .baselines import asur_events, joint_grouping, palla_containment, palla_match
from .community import cpm_extract, louvain_extract
from .errors import ConfigError
from .ged import Thresholds, build_evolution_chains, ged_track, inclusion_pairs
from .importance import MEASURES, MIN_NODES, SpConfig, group_importance
from .reports import evolution_table, threshold_sweep
from .tsn import Grouping, TemporalNetwork, window_interactions

log = logging.getLogger(__name__)

GROUPINGS = ("pregrouped", "cpm", "louvain")
TRACKERS = ("ged", "asur", "palla")


def parse_sweep(text) -> list:
    """``"50:100:10"`` -> ``[50, 60, ..., 100]``; a list passes through."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        start, stop, step = (float(p) for p in str(text).split(":"))
    except ValueError:
        raise ConfigError(f"sweep must look like start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ConfigError(f"bad sweep range {text!r}")
    values, v = [], start
    while v <= stop + 1e-9:
        values.append(round(v, 6))
        v += step
    return values


@dataclass
class PipelineConfig:
    edges: list = field(default_factory=list)
    edges_dialect: str = "tab-point"
    window_len: Optional[int] = None
    step: Optional[int] = None
    groups: Optional[str] = None
    joint_groups: Optional[str] = None
    grouping: str = "pregrouped"
    k: int = 6
    louvain_level: int = -1
    measure: str = "sp"
    epsilon: float = 0.5
    trackers: list = field(default_factory=lambda: ["ged"])
    alpha: float = 50.0
    beta: float = 50.0
    form_dissolve: float = 10.0
    sweep: Optional[object] = None
    kappa: float = 50.0
    out: str = "out"

    @classmethod
    def load(cls, path=None, **overrides) -> "PipelineConfig":
        data = {}
        if path is not None:
            try:
                with open(path, encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from None
            if not isinstance(data, dict):
                raise ConfigError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        if isinstance(data.get("edges"), str):
            data["edges"] = [data["edges"]]
        if isinstance(data.get("trackers"), str):
            data["trackers"] = [data["trackers"]]
        return cls(**data)

    def validate(self):
        """Reject inconsistent settings before any file is read."""
        if self.grouping not in GROUPINGS:
            raise ConfigError(f"grouping must be one of {GROUPINGS}")
        if self.measure not in MEASURES + ("none",):
            raise ConfigError(f"measure must be one of {MEASURES + ('none',)}")
        if self.edges_dialect not in io.DIALECTS:
            raise ConfigError(f"edges_dialect must be one of {io.DIALECTS}")
        if not self.trackers or any(t not in TRACKERS for t in self.trackers):
            raise ConfigError(f"trackers must be drawn from {TRACKERS}")
        if self.grouping == "pregrouped" and not self.groups:
            raise ConfigError("grouping 'pregrouped' needs a groups file")
        if self.grouping != "pregrouped" and not self.edges:
            raise ConfigError(f"grouping {self.grouping!r} needs edge files")
        if self.grouping != "pregrouped" and self.groups:
            raise ConfigError(f"a groups file was given but grouping is {self.grouping!r}")
        if "ged" in self.trackers and self.measure != "none" and not self.edges:
            raise ConfigError(f"measure {self.measure!r} needs edge files; use measure 'none' without them")
        if "palla" in self.trackers:
            if self.grouping == "louvain":
                raise ConfigError("palla matching needs clique-percolation groups, not louvain")
            if not self.joint_groups and not self.edges:
                raise ConfigError("palla needs joint-frame groups: give joint_groups or edge files")
        if self.k < 3:
            raise ConfigError("k must be at least 3")
        if (self.window_len is None) != (self.step is None):
            raise ConfigError("window_len and step go together")
        if self.window_len is not None and len(self.edges) != 1:
            raise ConfigError("windowing reads a single timestamped edge file")
        if not 0 < self.epsilon < 1:
            raise ConfigError("epsilon must lie in (0, 1)")
        if not 0 < self.kappa <= 100:
            raise ConfigError("kappa must lie in (0, 100]")
        for name in ("alpha", "beta", "form_dissolve"):
            if not 0 <= getattr(self, name) <= 100:
                raise ConfigError(f"{name} must lie in [0, 100]")
        if self.sweep is not None:
            if "ged" not in self.trackers:
                raise ConfigError("a threshold sweep needs the ged tracker")
            grid = parse_sweep(self.sweep)
            if not grid or any(not 0 <= v <= 100 for v in grid):
                raise ConfigError("sweep values must lie in [0, 100]")


def load_network(cfg: PipelineConfig) -> Optional[TemporalNetwork]:
    if not cfg.edges:
        return None
    if cfg.window_len is not None:
        records = io.parse_edges(cfg.edges[0], cfg.edges_dialect)
        return window_interactions(io.interactions_from_records(records), cfg.window_len, cfg.step)
    if len(cfg.edges) == 1:
        return io.network_from_records(io.parse_edges(cfg.edges[0], cfg.edges_dialect))
    # several files: the n-th file is timeframe n unless rows carry their own frame
    records = []
    for position, path in enumerate(cfg.edges, start=1):
        for r in io.parse_edges(path, cfg.edges_dialect):
            records.append(r if r.frame is not None else r._replace(frame=position))
    return io.network_from_records(records)


def build_grouping(cfg: PipelineConfig, tsn: Optional[TemporalNetwork]) -> Grouping:
    if cfg.grouping == "pregrouped":
        return io.parse_groups(cfg.groups)
    groups = []
    for frame in tsn:
        if cfg.grouping == "cpm":
            groups.extend(cpm_extract(frame, cfg.k))
        elif frame.edges and frame.total_weight > 0:
            groups.extend(louvain_extract(frame).groups(cfg.louvain_level))
    return Grouping.from_groups(groups)


def _importances(tsn, grouping, cfg, sp_cfg) -> dict:
    vectors = {}
    for g in grouping:
        if len(g) < MIN_NODES[cfg.measure]:
            continue
        vectors[g.key] = group_importance(tsn.frame(g.frame_index), g, cfg.measure, sp_cfg)
    return vectors


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run every configured stage; returns ``{artifact name: path}``."""
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    written = {}

    def table(name, columns, rows, delimiter="\t"):
        path = out / name
        io.write_table(path, columns, rows, delimiter)
        written[name] = path

    tsn = load_network(cfg)
    grouping = build_grouping(cfg, tsn)
    log.info("%d groups over %d timeframes", len(grouping), len(grouping.frames))
    path = out / "groups.tsv"
    path.write_text(io.serialize_groups(grouping), encoding="utf-8")
    written["groups.tsv"] = path

    sp_cfg = SpConfig(epsilon=cfg.epsilon)
    if tsn is not None and cfg.measure != "none":
        table("importance.tsv", io.IMPORTANCE_COLUMNS, io.importance_rows(_importances(tsn, grouping, cfg, sp_cfg)))

    if "ged" in cfg.trackers:
        measure = cfg.measure if tsn is not None else "none"
        pairs = inclusion_pairs(tsn, grouping, measure, sp_cfg)
        th = Thresholds(cfg.alpha, cfg.beta, cfg.form_dissolve)
        events = ged_track(tsn, grouping, measure, th, pairs=pairs)
        all_events = list(events)
        if cfg.sweep is not None:
            grid = parse_sweep(cfg.sweep)
            report = threshold_sweep(grouping, pairs, grid, grid, cfg.form_dissolve, tsn)
            table("sweep.csv", io.SWEEP_COLUMNS, [r.as_list() for r in report.rows], delimiter=",")
            all_events = [e for run in report.events.values() for e in run]
        table("events.tsv", io.EVENT_COLUMNS, io.event_rows(all_events))
        table("chains.tsv", io.CHAIN_COLUMNS, io.chain_rows(build_evolution_chains(events)))
        header, rows = evolution_table(events, len(tsn) if tsn is not None else None)
        table("evolution.tsv", header, rows)

    if "asur" in cfg.trackers:
        table("asur_events.tsv", io.ASUR_COLUMNS, io.asur_rows(asur_events(grouping, cfg.kappa)))

    if "palla" in cfg.trackers:
        joint = io.parse_groups(cfg.joint_groups) if cfg.joint_groups else joint_grouping(tsn, cfg.k)
        containment = palla_containment(grouping, joint)
        result = palla_match(containment, grouping)
        table("contained.tsv", io.CONTAINED_COLUMNS, io.contained_rows(containment))
        table("palla_matched.tsv", io.MATCHED_COLUMNS, io.matched_rows(result.matches))
        table("palla_unmatched.tsv", ["group_id", "timeframe"], [list(u) for u in result.unmatched])
    return written
