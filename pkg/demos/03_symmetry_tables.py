"""System sizes and free parameters per ansatz degree.

Reproduces the size table of the symmetry computation for the small
degrees: k unknowns, e1/t1 for the first-integral side condition, e2/t2
for the two commutator conditions, and p free parameters in the solution.
Degree 6 takes about a second; raise MAX_DEGREE if you have patience.
"""

import time

from selsolve.symmetry import system_stats

MAX_DEGREE = 6

print(f"{'n':>2} {'k':>6} {'e1':>6} {'t1':>6} {'e2':>6} {'t2':>6} "
      f"{'p':>3} {'secs':>6}")
for degree in range(3, MAX_DEGREE + 1):
    started = time.perf_counter()
    s = system_stats(degree)
    elapsed = time.perf_counter() - started
    print(f"{s.n:>2} {s.k:>6} {s.e1:>6} {s.t1:>6} {s.e2:>6} {s.t2:>6} "
          f"{s.p:>3} {elapsed:>6.2f}")

print("\nmost unknowns vanish: the systems select a few surviving words")
