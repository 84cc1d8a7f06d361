"""Critical points of the master function and the Gaudin model they diagonalise.

Run: python3 demos/bethe_and_gaudin.py
"""

from wronskit.bethe import MasterParams, fundamental_operator, kernel_polynomials, solve_critical, solve_critical_newton
from wronskit.bethe import orbit_sets_match
from wronskit.gaudin import gaudin_instance_checks, sing_dimension
from wronskit.polyring import mp

s = MasterParams((-1.5, -0.4, 0.3, 1.2, 2.0, 2.6), 1, 4)
print("Bethe equations for sl2 with six marked points, G(1,4):")
pts = solve_critical(s)
for x in pts:
    lv = [complex(v) for v in x.canonical().levels[0]]
    print("  roots of p1:", ", ".join(f"{z.real:+.5f}{z.imag:+.5f}i" for z in lv))
print(f"  {len(pts)} orbits; Newton on the equations alone agrees: "
      f"{orbit_sets_match(pts, solve_critical_newton(s, seed=3))}")

x = pts[0]
P = kernel_polynomials(fundamental_operator(x, s))
print("\nThe kernel of the fundamental differential operator is a space of polynomials")
print("whose Wronskian is prod (t - s_k):")
print("  distance to target:", float(P.monic_wronskian().distance(s.wronskian())))

print("\nBethe vectors are singular eigenvectors of the Gaudin Hamiltonians.")
for m in (2, 4, 6):
    d = 1 + m // 2
    pts_s = [mp.mpc(v) for v in [-1.1, -0.2, 0.45, 1.3, 1.9, 2.7][:m]]
    rep = gaudin_instance_checks(1, d, pts_s)
    print(f"  m={m}: {rep.orbits} Bethe vectors, singular weight-0 space has dimension "
          f"{sing_dimension(1, m, 0)}, all checks ok={rep.ok}")
    for c in rep.checks:
        print(f"      {c.name:16s} ok={c.ok}  {c.detail}")
