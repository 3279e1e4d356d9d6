"""Walk through the whole pipeline for GL_3 over the Gaussian integers.

Run with ``python demos/gaussian_gl3.py``; it takes a few seconds.
"""
from hermvor import report
from hermvor.cells import build_cells, summarize
from hermvor.homology import homology
from hermvor.verification import verify
from hermvor.voronoi import enumerate_perfect_forms

forms = enumerate_perfect_forms(3, -4)
print(report.census_table(forms))
print()

cx = build_cells(forms)
print(report.cells_table(summarize(cx)))
print()

h = homology(cx)
print(report.homology_table(h))
print()

rep = verify(cx)
print(report.mass_lines(rep.mass))
print("xi =", rep.xi.vector, "is a cycle:", rep.xi.ok)
