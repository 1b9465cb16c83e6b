"""Membership in A_alpha: regions for positive and rank-one operators, and the state bound."""

import numpy as np

from buzano_lab.alpha import alpha_region, membership, optimal_alpha
from buzano_lab.generators import SeedSpec, gen
from buzano_lab.linalg import adjoint

P = np.diag([2.0, 1.0])
reg = alpha_region(P)
print(f"diag(2, 1): {reg.kind} {reg.parameters}")
for a in (0.5, 1.0, 1.01, 1 + 0.2j):
    c = membership(P, a)
    print(f"  alpha = {a}: defect {c.defect:.4f}, member {c.member}, region says {reg.contains(a)}")

h = np.array([np.sqrt(2), 0])
H = np.outer(h, h)
reg = alpha_region(H)
print(f"h (x) h with ||h||^2 = 2: {reg.kind} center {reg.parameters[0]} radius {reg.parameters[1]}")
for a in (0.5 + 0.5j, 1.0, 0.02, 1.01):
    print(f"  alpha = {a}: member {membership(H, a).member}, region says {reg.contains(a)}")

r = optimal_alpha(np.diag([1.0, 3.0]))
print(f"center of mass of diag(1, 3): {r.minimizer:.6f}, distance {r.distance:.6f}")

# the variance tr(|T|^2 P) - |tr(TP)|^2 of a member is at most 1/|alpha|^2;
# for |alpha| < 1 that exceeds 1/|alpha|
alpha = 0.1
T = np.diag([20.0, 0.0])
P = np.eye(2) / 2
var = np.trace(adjoint(T) @ T @ P).real - abs(np.trace(T @ P)) ** 2
print(f"alpha = {alpha}: defect {membership(T, alpha).defect}, variance {var}, 1/|a| = {1 / alpha}, 1/|a|^2 = {1 / alpha**2}")

worst = 0.0
for i in range(500):
    a = 0.5j
    T = gen("member_alpha", 4, SeedSpec(1, "demo", (i,)), alpha=a)
    P = gen("density_matrix", 4, SeedSpec(1, "rho", (i,)))
    var = np.trace(adjoint(T) @ T @ P).real - abs(np.trace(T @ P)) ** 2
    worst = max(worst, var * abs(a) ** 2)
print(f"random members at alpha = 0.5i: max variance * |alpha|^2 = {worst:.4f} (never above 1)")
