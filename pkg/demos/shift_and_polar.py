"""Numerical radius versus norm for the 3x3 shift and its polar factors."""

import numpy as np

from buzano_lab.decompositions import polar
from buzano_lab.functionals import numerical_radius, range_boundary
from buzano_lab.linalg import op_norm

T = np.eye(3, k=-1)
print("T =\n", T.real)
print(f"||T|| = {op_norm(T):.12f}   omega(T) = {numerical_radius(T):.12f}   1/sqrt(2) = {1 / np.sqrt(2):.12f}")

# the partial isometry with the same kernel as T is T itself
V = polar(T).V
print(f"partial isometry: omega(V) = {numerical_radius(V):.12f}, ||V|| = {op_norm(V):.12f}")

# a unitary factor also works in T = V|T|; it is a cyclic shift, so W(V) reaches the unit circle
U = polar(T, unitary=True)
print("unitary factor =\n", np.round(U.V.real, 12))
print(f"unitary: omega(V) = {numerical_radius(U.V):.12f}, ||V|| = {op_norm(U.V):.12f}")
print(f"reconstruction error ||V|T| - T|| = {op_norm(U.V @ U.absT - T):.1e}")

# W(T) for the shift is a disk; every boundary point sits at the same radius
radii = [abs(p.value) for p in range_boundary(T, 12)]
print("boundary radii:", np.round(radii, 12))
