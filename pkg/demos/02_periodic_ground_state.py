"""Ground state of the homogeneous medium versus its closed form.

For constant coefficients V = m + lambda and Gamma the stationary cubic
Schrodinger equation has the explicit localized solution
w(x) = sqrt(2 m / Gamma) sech(sqrt(m) x), with constrained energy
c = m^{3/2} / Gamma * 4/3.  This makes the homogeneous problem a complete
oracle for the variational solver: seed with a Gaussian, minimize over the
constraint manifold, and compare against the formula pointwise.
"""

import math

import numpy as np

from sgslab.media import FunctionDescriptor, PeriodicMedium, ProblemParams
from sgslab.variational import Grid, SolverOptions, solve_ground_state

medium = PeriodicMedium(FunctionDescriptor(const=1.0), FunctionDescriptor(const=1.0))
params = ProblemParams(p=3.0, lam=0.0)
grid = Grid.from_extent(20.0, 0.01)

print("solving: -w'' + w = w^3 on [-20, 20], h = 0.01")
res = solve_ground_state(medium, params, grid, SolverOptions(tol=1e-8, seed_center=0.0))

# ---------------------------------------------------------------------------
# Energy against the closed form.
c_exact = 4.0 / 3.0
print(f"computed energy  c = {res.energy_c:.8f}")
print(f"closed form      c = {c_exact:.8f}")
print(f"relative error     = {abs(res.energy_c - c_exact) / c_exact:.2e}")
print(f"iterations         = {res.iterations}, residual = {res.residual:.2e}")
print()

# ---------------------------------------------------------------------------
# Profile against sqrt(2) sech(x).
exact = math.sqrt(2.0) / np.cosh(grid.x)
err = np.max(np.abs(res.state.values - exact))
print(f"max profile error vs sqrt(2) sech(x): {err:.2e}")
print(f"fitted tail decay rate: {res.decay_rate_fit:.4f} (exact: 1.0)")
print()

# ---------------------------------------------------------------------------
# The scaling laws are exact: doubling Gamma halves the energy, and
# m -> 2m multiplies it by 2^{3/2}.
for beta in (2.0, 4.0):
    m_b = PeriodicMedium(FunctionDescriptor(const=1.0), FunctionDescriptor(const=beta))
    c_b = solve_ground_state(m_b, params, grid, SolverOptions(tol=1e-7, seed_center=0.0)).energy_c
    print(f"Gamma = {beta:3.1f}:  c = {c_b:.7f}   (law predicts {c_exact / beta:.7f})")
