"""defigraph: query a knowledge base for word definitions and explore them as a tree."""

__version__ = "0.1.0"
