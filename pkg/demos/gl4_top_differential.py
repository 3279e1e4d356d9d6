"""The top differential of the GL_4 complex over the Gaussian integers.

Only the cells of dimension 15 and 14 are built.  Expect a few minutes.
"""
import time

from hermvor.cells import build_cells
from hermvor.homology import smith_normal_form
from hermvor.verification import xi_cycle_check
from hermvor.voronoi import enumerate_perfect_forms

t = time.perf_counter()
forms = enumerate_perfect_forms(4, -4)
print(f"{len(forms)} perfect forms, |M| = {[len(p.min_vectors) for p in forms]}")
cx = build_cells(forms, min_dim=14)
for n in (15, 14):
    print(n, [c.stabilizer.order for c in cx.cells[n]])
d15 = cx.differentials[15]
print("d_15 =", d15.dense())
snf = smith_normal_form(d15)
print("rank", snf.rank, "elementary divisors", dict(snf.divisors))
print("xi =", xi_cycle_check(cx).vector)
print(f"{time.perf_counter() - t:.0f}s")
