"""Analytic continuation of a Wronski fiber versus sliding of signed tableaux.

Roots live on the real projective line, parametrised by angles q (in units of
pi) through the Cayley map. Rotating the roots once around the circle permutes
the fiber; the same loop, read as a path of signed tableau entries, permutes
standard Young tableaux of the rectangle. One bijection intertwines the two.

Run: python3 demos/monodromy_and_slides.py
"""

from fractions import Fraction as F

from wronskit.tableaux import SignedTableau, SlidePath, ord_tableau, slide_path, slide_trace
from wronskit.wronski_solve import cycle_notation, rotation_waypoints, slide_monodromy_check

print("A single slide: the entry tau = 0 travels up to 10 through the (4,4,2) tableau.")
start = [0, -1, -2, -3, -4, -5, -6, -7, -8, -9]
path = SlidePath.linear([start, [10] + start[1:]])
T0 = SignedTableau.from_rows([[0, -1, -3, -8], [-2, -4, -6, -9], [-5, -7]])
for t, cells in slide_trace(T0, path):
    where = next(c for c, lab in cells.items() if lab == 0)
    print(f"  at tau = {float(t) * 10:4.1f} the moving entry sits in cell {where}")
T10 = slide_path(T0, path)
print("  final rows:", [[int(v) for v in row] for row in T10.rows()])
print("  ord:", ord_tableau(T10).rows())

q = [F(1, 10), F(37, 100), F(62, 100), F(85, 100), F(123, 100), F(158, 100)]
loops = [
    ("rotate by 1", rotation_waypoints(q, 1)),
    ("rotate by 2", rotation_waypoints(q, 2)),
    ("rotate by -1", rotation_waypoints(q, -1)),
    ("rotate by 3", rotation_waypoints(q, 3)),
    ("rotate by -2, uneven speeds", rotation_waypoints(q, -2, [F(3, 5), F(1, 3), F(2, 3), F(1, 4), F(3, 4), F(1, 2)])),
    ("rotate by 6", rotation_waypoints(q, 6)),
]
print("\nG(1,4): five spaces, five tableaux of the 2x3 rectangle.")
rep = slide_monodromy_check(1, 4, q, loops)
for (desc, g, s, ok) in rep.loops:
    print(f"  {desc:28s} fiber {cycle_notation(g):18s} tableaux {cycle_notation(s):18s} agree={ok}")
print(f"\nBijection (solution -> tableau index): {rep.bijection}; {rep.candidates} bijections fit every loop.")
for k, T in enumerate(rep.tableaux):
    print(f"  tableau {k}: {T.rows()}")
