"""
Numerical kernels: Clifford fibers, graded modules, band-limited fields,
Dirac-type operators, Pauli-type maps and Lagrangian identities.
"""
