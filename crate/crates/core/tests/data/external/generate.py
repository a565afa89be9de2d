"""Writes a planted partially coherent instance with numpy.

Run from this directory: python3 generate.py
"""
import json

import numpy as np

rng = np.random.default_rng(20240611)
n, singletons, groups, size = 6, 8, 4, 3
m = singletons + groups * size

a = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)
z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
b = a @ z

structure = [[k] for k in range(singletons)]
structure += [[singletons + g * size + j for j in range(size)] for g in range(groups)]

phase = np.zeros(m)
for members in structure:
    anchor = b[members[0]]
    for k in members[1:]:
        phase[k] = np.angle(b[k] * np.conj(anchor))

with open("operator.csv", "w") as f:
    f.write("row,col,re,im\n")
    for i in range(m):
        for j in range(n):
            f.write(f"{i},{j},{float(a[i, j].real)!r},{float(a[i, j].imag)!r}\n")
with open("magnitudes.csv", "w") as f:
    f.write("index,magnitude,phase_diff\n")
    for k in range(m):
        f.write(f"{k},{float(abs(b[k]))!r},{float(phase[k])!r}\n")
with open("reference.csv", "w") as f:
    f.write("index,re,im\n")
    for k in range(m):
        f.write(f"{k},{float(b[k].real)!r},{float(b[k].imag)!r}\n")
with open("coherence.json", "w") as f:
    json.dump(structure, f)
    f.write("\n")
