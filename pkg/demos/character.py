# Two-variable character of the rank -28 Weyl-module algebra.
#
# The character is 1/phi for the shape 1^28: a Laurent series in p (charge)
# and q (degree).  We print the layers through degree 7/2 and compare one
# column against a direct count of creation-mode multisets.

from fractions import Fraction

from ruvoa import moonshine, weylvoa

table = moonshine.character_table(Fraction(7, 2), 28)
print(moonshine.character_csv(table))

# The same numbers from counting states, with no series arithmetic at all.
dims = weylvoa.graded_dims(28, 3)
for degree in (Fraction(1), Fraction(2), Fraction(3)):
    print(degree, dims[(degree, 0)], table[(degree, 0)])

# Several coefficients split into dimensions of irreducible characters.
ru, cover = moonshine.degree_table()
print(moonshine.decompose_coefficient(31465, ru, 4, 10))
print(moonshine.decompose_coefficient(4060, cover, 3))
