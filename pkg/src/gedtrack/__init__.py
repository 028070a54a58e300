"""Track how groups in a temporal social network evolve between timeframes."""
from .errors import ConfigError, FormatError, GedTrackError, ParameterError
from .ged import (
    EventRecord, EventType, EvolutionChain, InclusionPair, Thresholds, build_evolution_chains,
    classify_pair, ged_track, inclusion, inclusion_pairs, inclusion_quantity_only, overlap,
)
from .importance import ImportanceVector, SpConfig, group_importance, measure_frame, social_position
from .tsn import FrameGraph, Group, Grouping, TemporalNetwork, build_frame_graph, window_interactions

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "FormatError", "GedTrackError", "ParameterError",
    "EventRecord", "EventType", "EvolutionChain", "InclusionPair", "Thresholds",
    "build_evolution_chains", "classify_pair", "ged_track", "inclusion", "inclusion_pairs",
    "inclusion_quantity_only", "overlap",
    "ImportanceVector", "SpConfig", "group_importance", "measure_frame", "social_position",
    "FrameGraph", "Group", "Grouping", "TemporalNetwork", "build_frame_graph", "window_interactions",
]
