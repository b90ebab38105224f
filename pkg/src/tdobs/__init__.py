"""Exact treedepth, level-by-level enumeration of bounded-treedepth graphs,
and n-vertex obstruction sets under induced subgraphs, subgraphs and minors."""

__version__ = "0.1.0"
