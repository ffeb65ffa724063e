"""Separated matchings on bichromatic point sets in convex position."""

from .core import (
    BLUE,
    RED,
    AlternatingPath,
    Coloring,
    Mode,
    SeparatedMatching,
    SplitLine,
    crosses,
    matching_to_path,
    validate_matching,
    validate_path,
)
from .exact import max_alternating_path, max_separated_matching
from .constructive import (
    PipelineConstants,
    PortfolioConfig,
    StrategyResult,
    general_monochromatic,
    interval_doubling,
    pipeline,
    portfolio,
    runs_matching,
)

__version__ = "0.1.0"

__all__ = [
    "BLUE", "RED", "AlternatingPath", "Coloring", "Mode", "SeparatedMatching", "SplitLine",
    "crosses", "matching_to_path", "validate_matching", "validate_path",
    "max_alternating_path", "max_separated_matching",
    "PipelineConstants", "PortfolioConfig", "StrategyResult", "general_monochromatic",
    "interval_doubling", "pipeline", "portfolio", "runs_matching",
]
