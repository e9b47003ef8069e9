"""
Dirac Verify

Clifford-module machinery on a flat torus: graded Clifford modules, Dirac-type
operators and their decompositions, Pauli and pi maps, and the Lagrangian trace
identities built on them.
"""

__version__ = "1.0.0"
