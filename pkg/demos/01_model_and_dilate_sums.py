"""Sums of dilates in the polynomial model.

For transcendental lambda, Q[lambda] is a Q-vector space with basis
1, lambda, lambda^2, ...  A set of polynomials is a set of integer vectors,
and multiplying by lambda shifts every coordinate one slot to the right.
"""
from dilates import PointSet, ap, dilate_sum, doubling_K, kl_grid, parse_set, phi

# 0, 1 and 1 + lambda, written as coefficient vectors
A = parse_set("0\n1\n1 1\n")
print("A              =", A.tuples())
print("lambda * A     =", phi(A).tuples())
print("A + lambda*A   =", dilate_sum(A).tuples())
print()

# a progression is the worst case: the sum is a full n x n box
for n in (2, 5, 10):
    print(f"ap({n:2d}): |A| = {n:2d}, |A + lambda A| = {len(dilate_sum(ap(n))):3d}")
print()

# grids do much better at the same size
for n, m in [(4, 2), (2, 4), (16, 1)]:
    G = kl_grid(n, m)
    print(f"grid {n}^{m}: |A| = {len(G)}, |A + lambda A| = {len(dilate_sum(G))}, "
          f"K = {doubling_K(G)}")

# rational input is cleared to a common denominator first
print()
print("parse '1/2, 3/2':", parse_set("1/2\n3/2").tuples())
print("PointSet trims zero tails:", PointSet([(1, 0, 0), (2, 0, 0)]).tuples())
