"""Commuting approximants on cell decompositions"""
from .cells import AxisLayout, CellDecomposition, decompose, layout
from .construction import (
    cutoffs,
    default_support,
    flatten_F,
    flex_pair,
    flex_report,
    flex_sequence,
    localize_G,
    locally_constant_where,
    require_supported,
)

__all__ = [
    "CellDecomposition",
    "AxisLayout",
    "decompose",
    "layout",
    "cutoffs",
    "default_support",
    "flatten_F",
    "localize_G",
    "flex_pair",
    "flex_report",
    "flex_sequence",
    "locally_constant_where",
    "require_supported",
]
