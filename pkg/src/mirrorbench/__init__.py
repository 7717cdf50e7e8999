"""Iterated fit-and-generate stress tests for graph generative models."""
from .graph import Graph, from_edge_list, read_edge_list, write_edge_list

__version__ = "0.1.0"

__all__ = ["Graph", "from_edge_list", "read_edge_list", "write_edge_list", "__version__"]
