"""Exact computation with higher-rank graphs and their Kumjian-Pask algebras."""

from importlib import resources

from kplab.kgraph import (
    Edge,
    GraphError,
    GraphFormatError,
    GraphSpec,
    KGraph,
    Path,
    build_graph,
    load_graph,
    omega_graph,
    parse_graph,
    serialize_graph,
)

__version__ = "0.1.0"


def bundled(name):
    """Path to a bundled example file, e.g. ``bundled("graphA.kg")``."""
    return resources.files("kplab") / "data" / name


def bundled_graph(name):
    return build_graph(parse_graph(bundled(name).read_text()))


__all__ = [
    "Edge", "GraphError", "GraphFormatError", "GraphSpec", "KGraph", "Path",
    "build_graph", "bundled", "bundled_graph", "load_graph", "omega_graph",
    "parse_graph", "serialize_graph",
]
