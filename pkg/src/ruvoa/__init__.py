"""Exact computations for a rank -28 Weyl-module vertex algebra, the
28-dimensional Gaussian-integer lattice with its quartic invariant, and the
two-variable trace series attached to the Rudvalis group.

Modules: qseries (exact series), frameshape (Frame shapes and trace
functions), cwlattice (lattice, minimal vectors, quartic invariant),
weylvoa (mode algebra), moonshine (traces, eta quotients, modular checks),
cli (command line).
"""

__version__ = "0.1.0"
