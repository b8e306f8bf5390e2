"""A surface state pinned at the junction of two media.

Glue two homogeneous media at x = 0: the right side has a higher potential
but a much stronger nonlinearity, so concentrating near the interface is
cheaper than living on either half-line alone.  The signature of a genuine
surface ground state is the strict energy gap c < min(c1, c2), where c1 and
c2 are the half-line (periodic-medium) ground-state energies.
"""

from sgslab import criteria
from sgslab.media import FunctionDescriptor, PeriodicMedium, ProblemParams, compose_interface
from sgslab.variational import Grid, SolverOptions, solve_ground_state

params = ProblemParams(p=3.0, lam=0.0)
side1 = PeriodicMedium(FunctionDescriptor(const=1.2), FunctionDescriptor(const=2.0))  # x > 0
side2 = PeriodicMedium(FunctionDescriptor(const=1.0), FunctionDescriptor(const=1.0))  # x < 0
interface = compose_interface(side1, side2)

grid = Grid.from_extent(15.0, 0.02)
opts = SolverOptions(tol=1e-7, seed_center=0.0)

# ---------------------------------------------------------------------------
# The two half-line reference energies (both have scaling-law closed forms).
print("side 1 (x > 0): V = 1.2, Gamma = 2    side 2 (x < 0): V = 1, Gamma = 1")
c1 = solve_ground_state(side1, params, grid, opts).energy_c
c2 = solve_ground_state(side2, params, grid, opts).energy_c
print(f"c1 = {c1:.7f}   (oracle: {1.2**1.5 / 2 * 4 / 3:.7f})")
print(f"c2 = {c2:.7f}   (oracle: {4 / 3:.7f})")
print()

# ---------------------------------------------------------------------------
# The interface problem.
res = solve_ground_state(interface, params, grid, SolverOptions(tol=1e-7))
print(f"interface energy c = {res.energy_c:.7f}")
print(f"energy gap min(c1, c2) - c = {min(c1, c2) - res.energy_c:.5f}")
print(f"center of mass = {res.center_of_mass:+.3f}  (pinned near the junction)")
print()

# ---------------------------------------------------------------------------
# Certify it.
report = criteria.energy_verdict(res.energy_c, c1, c2, tol=1e-6)
print(f"verdict: {report.verdict.value}")
print("a strict gap means the minimizing sequence cannot escape to either")
print("half-line: the surface state exists and is exponentially localized.")
