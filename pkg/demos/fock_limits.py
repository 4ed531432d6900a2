"""N independent squeezers and the 1/N law.

When the pump is much longer than the photon coherence time, emission looks
like N independent two-mode squeezers. Counting which squeezer emitted each
pair gives chi = 1/N in the weak-pump limit; the exact table also shows the
small finite-gain excess, and the approach to Poisson statistics at large N.
"""

import math

from fourphoton import (
    MultiProcessState,
    chi_from_fock,
    four_photon_decomposition,
    poisson_limit_check,
    sector_norms,
)

xi = 0.01
print(f"xi = {xi}")
print(f"{'N':>4} {'<2|2>':>6} {'<4|4>':>6} {'w_entangled':>12} {'chi (exact)':>12} "
      f"{'1/N':>8} {'C^2N (N+1)/N - 1':>18}")
for n in (1, 2, 3, 4, 10, 30):
    norm2, norm4 = sector_norms(n)
    d = four_photon_decomposition(n)
    chi = chi_from_fock(MultiProcessState.build(n, xi))
    gain = math.cosh(xi) ** (2 * n) * (n + 1) / n - 1
    print(f"{n:4d} {norm2:6d} {norm4:6d} {d.weight_entangled:12.4f} {chi:12.7f} "
          f"{1 / n:8.4f} {gain:18.7f}")

print("\ntotal-variation distance to Poisson, mean 0.2 pairs")
for n in (10, 100, 1000):
    print(f"  N = {n:5d}: {poisson_limit_check(n, 0.2):.2e}")

state = MultiProcessState.build(3, 0.2)
print(f"\npair-number distribution, N = 3, xi = 0.2 (tail bound {state.tail_bound:.1e})")
for n, p in enumerate(state.probabilities[: state.process.max_pairs + 1]):
    print(f"  {n}  {p:.6e}")
