#!/usr/bin/env python3
"""Regenerates radial_dirichlet.csv with an independent eigensolver (SciPy).

Second-order Dirichlet finite differences of -psi'' + V psi on (0, 14],
N = 6000 nodes, V(r) = (a^2/4) [(3 - 4A) + (4A - 6) y] / (1 - y)^2 with
y = exp(2 a r), a = -1, A = 12. Levels below V(inf) are bound.
"""
import numpy as np
from scipy.linalg import eigh_tridiagonal

a, A = -1.0, 12.0
r_max, n_points = 14.0, 6000
h = r_max / (n_points - 1)
r = h * np.arange(1, n_points - 1)
y = np.exp(2 * a * r)
V = 0.25 * a * a * ((3 - 4 * A) + (4 * A - 6) * y) / np.expm1(2 * a * r) ** 2
v_inf = 0.25 * a * a * (3 - 4 * A)

d = 2 / h**2 + V
e = -np.ones(len(r) - 1) / h**2
w, vecs = eigh_tridiagonal(d, e, select="v", select_range=(-1e6, v_inf))

print("index,E,nodes")
for k, E in enumerate(w):
    v = vecs[:, k]
    v = v[np.abs(v) > 1e-12 * np.abs(v).max()]
    nodes = int(np.sum(np.sign(v[1:]) != np.sign(v[:-1])))
    print(f"{k},{float(E)!r},{nodes}")
