"""The selection-system solver, stage by stage.

Builds the degree-3 symmetry system (113 unknowns, 595 equations), harvests
1-term equations, sorts what is left by size, streams it through the pivot
map, and cross-checks the result against dense elimination.
"""

from selsolve import dense_nullspace_oracle, lsss_solve
from selsolve.solver import ZeroRegistry, find_zeros, length_sort
from selsolve.symmetry import build_symmetry_system

system = build_symmetry_system(3, include_nc=True)
print(f"degree-3 system: {len(system.equations)} equations, "
      f"{len(system.universe)} unknowns, {system.term_total} terms")

registry = ZeroRegistry()
found = find_zeros(system, registry)
print(f"\n1-term harvesting: {len(registry)} zeros "
      f"in rounds {found.new_per_round}")
print(f"remaining equations: {len(found.remaining.equations)}")

ordered = length_sort(found.remaining)
sizes = [eq.lhs.term_count for eq in ordered.equations[:10]]
print(f"after length sort, first sizes: {sizes}")

state = lsss_solve(system)
print(f"\nfull solve: zeros={len(state.zeros)} pivots={len(state.pivots)} "
      f"free={state.free_count}")

rank, basis = dense_nullspace_oracle(system)
print(f"oracle: rank={rank} nullity={len(system.universe) - rank}")
print("oracle basis satisfies the solved state:",
      all(state.contains_vector(vec) for vec in basis))
