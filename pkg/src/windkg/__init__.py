"""Wind-turbine O&M knowledge graph engine with explainable decision support."""

from .graph import PropertyGraph

__version__ = "0.1.0"

__all__ = ["PropertyGraph", "__version__"]
