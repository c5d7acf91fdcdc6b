"""Simulated RDF knowledge-graph storage on public, private and hybrid ledgers."""

__version__ = "0.1.0"
