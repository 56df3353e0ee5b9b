"""Streaming process discovery with bounded memory."""

from ._sbar import (
    DiscoveryError,
    DirectlyFollows,
    LabelMismatch,
    ParseError,
    PetriNet,
    ProcessTree,
    StreamingMiner,
    TreeSyntaxError,
    alpha,
    directly_follows,
    evaluate,
    flower,
    footprint_distance,
    heuristics,
    inductive,
    simulate,
)

__all__ = [
    "DiscoveryError",
    "DirectlyFollows",
    "LabelMismatch",
    "ParseError",
    "PetriNet",
    "ProcessTree",
    "StreamingMiner",
    "TreeSyntaxError",
    "alpha",
    "directly_follows",
    "evaluate",
    "flower",
    "footprint_distance",
    "heuristics",
    "inductive",
    "simulate",
]
