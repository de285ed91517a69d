"""Exact oscillation ranks, D-norms and DSC indices on countable compact spaces."""
from .func import FuncTree, const, evaluate
from .oscillation import d_index, dbsc_norm, dsc_index, osc_alpha, osc_sequence, uv_decomposition
from .space import Space, SubsetTree, enumerate_points, ordinal_space

__version__ = "0.1.0"

__all__ = [
    "FuncTree", "Space", "SubsetTree", "const", "d_index", "dbsc_norm", "dsc_index",
    "enumerate_points", "evaluate", "ordinal_space", "osc_alpha", "osc_sequence", "uv_decomposition",
]
