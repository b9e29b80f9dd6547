"""
Hankel matrices and their shorthand
===================================

A Hankel matrix is constant along each skew-diagonal, so it is fixed by its
first row and last column. The shorthand lists those entries with the shared
corner set off by slashes.
"""

from combcluster import (
    BlockShorthand,
    check_orthogonal,
    expand_shorthand,
    parse_shorthand,
    to_shorthand,
)

s = parse_shorthand("[1,2/3/5,7]")
g = expand_shorthand(s)
print("shorthand", s, "expands to")
print(g.to_float())

# Reading it back is exact.
assert to_shorthand(g) == s

# The two-mode swap [0/1/0] squares to the identity...
ok, _ = check_orthogonal(expand_shorthand(BlockShorthand.scalar([0, 1, 0])))
print("[0/1/0] squares to 1:", ok)

# ...while [0/1/1] does not; the residual A@A - 1 tells us where.
ok, residual = check_orthogonal(expand_shorthand(BlockShorthand.scalar([0, 1, 1])))
print("[0/1/1] squares to 1:", ok)
print(residual.to_float())
