"""Count perfect forms of rank 3 for a list of discriminants.

    python demos/census.py -3 -4 -7 -8 -11 -15
"""
import sys
import time

from hermvor.voronoi import enumerate_perfect_forms

for D in map(int, sys.argv[1:] or ["-3", "-4", "-7", "-8", "-11"]):
    t = time.perf_counter()
    n = len(enumerate_perfect_forms(3, D))
    print(f"D={D:4d}  {n:5d} classes  {time.perf_counter() - t:7.1f}s", flush=True)
