"""Commuting-graph perfection toolkit.

Builds finite groups from short spec strings, forms their commuting graphs,
and decides perfection via Berge's characterization (no odd hole or odd
antihole), with verifiable certificates and witness constructions.
"""

__version__ = "0.1.0"
