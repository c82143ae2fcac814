"""How small can |A + lambda A| be?

Exhaustive search over downward-closed sets gives exact minima for small n.
Beyond that, seeded simulated annealing gives upper bounds, and the table
sets them against the trivial floor 2n-1 and the two asymptotic shapes.
"""
from dilates import exact_min, kl_grid, local_search
from dilates.search import bounds_table, table_to_csv

for n in range(1, 8):
    r = exact_min(n)
    print(f"D({n}) = {r.best_value:3d}  witness {r.witness.tuples()}")
print()

G = kl_grid(2, 4)
r = local_search(16, 4, budget=400, seed=0, init=G)
print(f"annealing from the 2^4 grid: best {r.best_value} "
      f"(grid itself gives 2^2 * 3^3 = 108)")
print()

print(table_to_csv(bounds_table([2, 4, 8, 16, 24], budget=300)))
