# Virasoro and Heisenberg modes on a small Fock window.
#
# For N pairs of symplectic fermions the conformal vector has central
# charge -N and J(0) measures charge.  The relation checks are exact matrix
# identities over the Gaussian rationals.

from fractions import Fraction

from ruvoa import weylvoa

for N in (1, 2):
    results = weylvoa.relation_suite(N, max_degree=3, mmax=2)
    failed = [r for r in results if not r[3]]
    print("N=%d: %d relations checked, %d failed" % (N, len(results), len(failed)))

# In the twisted sector the vacuum has conformal weight -N/8.
for N in (1, 2, 3):
    print(N, weylvoa.twisted_vacuum_omega(N))

# Delta_z is nilpotent: the correction to the vertex operator is a single z^-2 term.
H = weylvoa.HermSpace(1)
v = weylvoa.make_state([(H.e_prime(0), Fraction(-1, 2)), (H.e(0), Fraction(-3, 2))])
print(weylvoa.delta_z(v, 1), weylvoa.delta_z_power(v, 1, 2))
