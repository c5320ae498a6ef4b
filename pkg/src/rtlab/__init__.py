"""Ramsey-Turan construction lab: sphere geometry, Bollobas-Erdos-type
graph builders, exact clique analytics, and weighted-graph certificates."""

__version__ = "0.1.0"
