"""Rational points on odd-degree hyperelliptic curves from 2-Selmer data.

Exact 2-adic arithmetic, Jacobian halving and the q-map on residue disks,
assembled into a certifying driver with an independent verifier.
"""

__version__ = "0.1.0"
