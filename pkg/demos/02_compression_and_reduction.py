"""Compressions push a set down onto the coordinate axes.

C_k rewrites each line parallel to axis k as an initial segment 0..s-1.
Repeating over all axes ends in a downward-closed set, and the dilate sum
never grows along the way.  reduce_dim then strips unused coordinates.
"""
import random

from dilates import (
    PointSet,
    compress_full,
    compress_k,
    dilate_sum,
    doubling_K,
    is_compressed,
    reduce_dim,
)
from dilates.compression import compression_sweeps

A = PointSet([(0, 0), (0, 3), (2, 0), (2, 3)])
print("A          :", A.tuples(), "| |A+lA| =", len(dilate_sum(A)))
B = compress_k(A, 2)
print("C_2(A)     :", B.tuples(), "| |A+lA| =", len(dilate_sum(B)))
C, sweeps = compression_sweeps(A)
print(f"compressed : {C.tuples()} | |A+lA| = {len(dilate_sum(C))} after {sweeps} sweep(s)")
print("downward closed:", is_compressed(C))
print()

# a sparse set in 6 dimensions collapses to low dimension
rng = random.Random(7)
R = PointSet([tuple(rng.choice((0, 0, 0, 3)) for _ in range(6)) for _ in range(12)])
red = reduce_dim(R)
print(f"raw set: |A| = {len(R)}, dim = {R.dim}, |A+lA| = {len(dilate_sum(R))}")
print(f"reduced: |A| = {len(red)}, dim = {red.dim}, |A+lA| = {len(dilate_sum(red))}")
print(f"dimension bound: d = {red.dim} <= 2K = {2 * doubling_K(red)}")
