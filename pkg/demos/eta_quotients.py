# Limits of the twisted traces as p -> 1.
#
# For most classes the limit vanishes or diverges.  For ten classes it is a
# nonconstant eta quotient, recognised here from its q-expansion, and the
# rescaled function is invariant under a level-N congruence group and
# mapped to its reciprocal by the Fricke involution.

from ruvoa import moonshine

for c in moonshine.load_classes():
    print(c.ru, moonshine.f_tilde(c, moonshine.SIDE_A, order=4))

for c in moonshine.nonconstant_classes():
    r = moonshine.genus_zero_check(c)
    print(c.ru, r["group"], "max deviation %.1e" % r["max_deviation"], r["passed"])

# The two limits multiply to one exactly.
print(moonshine.reciprocity_check(moonshine.get_class("29A"), 20))
