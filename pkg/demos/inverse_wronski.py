"""Spaces of polynomials with a prescribed Wronskian.

Run: python3 demos/inverse_wronski.py
"""

import numpy as np

from wronskit.grassmann import degree_iota, real_degree
from wronskit.wronski_solve import clustered_reality_probe, inverse_wronski, is_real_space

rng = np.random.default_rng(7)

print("Generic Wronskians have degree_iota(n, d) preimages in G(n, d).")
print("When every root is real, every preimage turns out to be real too:\n")
for n, d in [(1, 3), (1, 4), (2, 4), (1, 5)]:
    N = (n + 1) * (d - n)
    roots = sorted(rng.uniform(-4, 4, size=N))
    fib = inverse_wronski(None, n, d, roots=roots, seed=0)
    real = sum(is_real_space(s.space) for s in fib.solutions)
    sv = min(s.jacobian_sv for s in fib.solutions)
    print(f"  G({n},{d}): {len(fib.solutions):2d}/{degree_iota(n, d):2d} found, {real:2d} real, "
          f"min scaled Jacobian sv {sv:.2e}")

print("\nBoth points of the G(1,3) fiber over roots -1, 0, 1, 0.31, as echelon bases:")
fib = inverse_wronski(None, 1, 3, roots=[-1, 0, 1, 0.31])
for sol in fib.solutions:
    print("  ", [[f"{complex(c).real:+.5f}" for c in f.coeffs] for f in sol.space.basis])

print("\nWith a pair of complex conjugate roots the real count can drop:")
for trial in range(3):
    r = sorted(rng.uniform(-4, 4, size=3))
    z = complex(rng.normal(), abs(rng.normal()) + 0.2)
    fib = inverse_wronski(None, 1, 4, roots=[*r, 0.5, z, z.conjugate()], seed=trial)
    print(f"  G(1,4): {sum(is_real_space(s.space) for s in fib.solutions)} of {len(fib.solutions)} real")
print(f"  ...but never below |real_degree(1,4)| = {abs(real_degree(1, 4))}.")

print("\nRoots spread as 10, 100, 1000, ... stay real and transverse:")
for n, d in [(1, 3), (1, 4), (2, 4)]:
    rep = clustered_reality_probe(n, d, 10.0)
    print(f"  G({n},{d}): {rep.count}/{rep.expected} found, all real={rep.all_real}, "
          f"min sv {rep.min_jacobian_sv:.1e}")
