"""Quasi-exponential Wronskians, the matrix Z(b, alpha) and Calogero-Moser pairs.

Run: python3 demos/zmatrix_and_cm.py
"""

from wronskit.polyring import mp
from wronskit.spectra import (
    build_Z,
    cm_reality_sample,
    cm_roundtrip,
    relation_roundtrip,
    theorem2_contrapositive_sample,
    wr_identity_check,
)

a, b = [0, 2], [0, 1]
print("Quasi-polynomials (t - a_i) exp(b_i t) with a = (0, 2), b = (0, 1).")
print("  Wronskian identity deviation:", wr_identity_check(a, b).deviation)
rel = relation_roundtrip(a, b)
print("  derived alpha:", [complex(x) for x in rel.alpha])
def show(zs):
    return sorted((round(float(mp.re(z)), 12), round(float(mp.im(z)), 12)) for z in zs)


print("  eig Z(b, alpha):", show(build_Z(b, rel.alpha).eigenvalues()))
print("  roots of the Wronskian's polynomial part:", show(rel.roots))

print("\nNon-real alpha never gave a real spectrum in random samples:")
for size, trials in [(2, 5000), (3, 2000), (5, 500)]:
    rep = theorem2_contrapositive_sample(size, trials, seed=1)
    print(f"  size {size}: {rep.trials} trials, violations {rep.violations}, "
          f"smallest max|Im| {rep.min_max_imag:.2e}")

print("\nCalogero-Moser pairs (X, Z) with [X, Z] - I of rank one: normalising a random")
print("conjugate of Z(b, alpha) recovers b and alpha.")
for size in range(2, 7):
    r = cm_roundtrip(size, 10, seed=size)
    print(f"  size {size}: max error b {r.max_b_error:.1e}, alpha {r.max_alpha_error:.1e}, "
          f"rank-one defect {r.max_rank_ratio:.1e}")

print("\nReal-spectrum frequency of random pairs with real b:")
for size in (2, 3, 4):
    rep = cm_reality_sample(size, 200, seed=size)
    print(f"  size {size}:", rep.to_json())
