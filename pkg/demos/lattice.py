# The rank 28 lattice over the Gaussian integers.
#
# The generators are closed under the 448-element monomial group, reduced
# to a basis, and checked to be even, unimodular and rootless.  Listing all
# minimal vectors takes a couple of minutes on one core, so it only runs
# when asked for.

import sys
import time

import numpy as np

from ruvoa import cwlattice

t = time.time()
L = cwlattice.build_lattice()
print("rank", L.rank, "det", L.determinant(), "even", L.is_even(), "min", L.minimum())
print("built in %.1f s" % (time.time() - t))

red, U, gram = L.reduced()
print("reduced Gram diagonal", np.diag(gram)[:8], "...")

if "--enumerate" in sys.argv:
    V = cwlattice.enumerate_minimal(L)
    print(len(V), "minimal vectors")
    delta = cwlattice.build_delta(V)
    group = cwlattice.monomial_group()
    print("corner value", delta.corner_value())
    print("invariant", all(cwlattice.delta_invariant_under(delta, g) for g in group))
