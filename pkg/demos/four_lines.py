"""Lines meeting four tangent lines of the twisted cubic gamma(t) = (t, t^2, t^3).

Run: python3 demos/four_lines.py
"""

from fractions import Fraction as F

import numpy as np

from wronskit.fourlines import (
    discriminant_fourlines,
    lines_meeting_four,
    monotone_flag_instance,
    tangent_line,
    wronskian_of_line,
)
from wronskit.polyring import Polynomial
from wronskit.harness import ExperimentConfig, run_experiment, table_rows

print("Tangent lines at -1, 0, 1 all lie on the hyperboloid x^2 - y^2 + z^2 = 1.")
for s in (-1, 0, 1):
    print(f"  tangent at {s:2d}: exact={tangent_line(s).exact}")

print("\nThe lines meeting all three are one ruling of that hyperboloid, so a fourth")
print("tangent line picks out its two meeting points. Both transversals are real:")
for s4 in (F(31, 100), F(-7, 2), F(5), "inf"):
    sol = lines_meeting_four(s4)
    print(f"  s4={str(s4):>6}: {len(sol.lines)} transversals, real={sol.real_count}, "
          f"discriminant={float(sol.discriminant):.4g}")

sol = lines_meeting_four(F(31, 100))
print("\nEach transversal, read as a pencil of quadrics, has Wronskian with roots -1, 0, 1, 0.31:")
for L in sol.lines:
    W = wronskian_of_line(L).monic()
    print("  ", [f"{complex(c).real:+.4f}" for c in W.coeffs])

print("\nThe discriminant 2 + 6 s^2 never vanishes for real s; across random real")
rng = np.random.default_rng(0)
vals = [float(discriminant_fourlines(*np.sort(rng.normal(size=4)))) for _ in range(1000)]
print(f"configurations its minimum is {min(vals):.3g}. For the Wronskian t^4 - t it is",
      discriminant_fourlines(Polynomial.rational([0, -1, 0, 0, 1])))

print("\nSecant line through gamma(v), gamma(w) instead of the fourth tangent line.")
print("Monotone orderings always give two real transversals; interleaved ones need not:")
for v, w in [(F(3, 2), F(5, 2)), (F(1, 10), F(3)), (F(1, 2), F(3))]:
    inst = monotone_flag_instance(v, w)
    print(f"  v={str(v):>5} w={str(w):>3}  ordering {inst.word} monotone={inst.monotone} real={inst.real_count}")

print("\nFrequency table over 300 random draws of each ordering:")
for word in ("11122", "21112", "11212", "12121"):
    rec = run_experiment(ExperimentConfig("monotone-fourlines", trials=300, seed=1, params={"ordering": word}))
    header, rows = table_rows(rec)
    print("  ", dict(zip(header, rows[0])))
