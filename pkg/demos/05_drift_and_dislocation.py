"""Two borderline phenomena: escaping mass and dislocated lattices.

First, a configuration where no surface state exists: the energy infimum is
only approached by profiles sliding off to one side, and on a finite grid
the "minimizer" visibly drifts outward as the domain grows.  Second, a
dislocated lattice where a genuine surface state does exist and the energy
gap can be measured directly.
"""

from sgslab import criteria, oracle
from sgslab.media import (
    FunctionDescriptor,
    PeriodicMedium,
    ProblemParams,
    compose_interface,
    dislocate,
)
from sgslab.variational import Grid, SolverOptions, solve_ground_state

# ---------------------------------------------------------------------------
# Part 1: non-existence and drift.  Side 2 has a higher potential and weaker
# nonlinearity, so everything favors side 1 -- but a translated profile on
# side 1 keeps lowering its energy forever.
params = ProblemParams(p=3.0, lam=0.0)
m = compose_interface(
    PeriodicMedium(FunctionDescriptor(const=1.0), FunctionDescriptor(const=2.0)),
    PeriodicMedium(FunctionDescriptor(const=2.0), FunctionDescriptor(const=1.0)),
)
print("drift configuration: V1=1, Gamma1=2 | V2=2, Gamma2=1")
print(f"ordering test: {criteria.nonexistence_check(m).verdict.value}")
print()

print("upper bounds from localized trial states moving rightward:")
grid = Grid.from_extent(20.0, 0.02)
for center in (0.0, 2.0, 4.0, 8.0):
    fam = oracle.AnsatzFamily((0.8, 1.2), (0.8, 1.2), (center, center), 3)
    bound = oracle.ansatz_upper_bound(m, params, fam, grid)
    print(f"  center {center:4.1f}:  c <= {bound:.7f}")
print("the bounds approach the half-line value 2/3 = 0.6666667 from above,")
print("which is never attained: the infimum escapes to +infinity.")
print()

print("finite-domain minimizers drift outward as the box grows:")
for L in (20.0, 40.0):
    g = Grid.from_extent(L, 0.05)
    res = solve_ground_state(m, params, g, SolverOptions(tol=5e-5, strict=False, max_iter=100_000))
    print(f"  L = {L:4.0f}:  center of mass = {res.center_of_mass:6.3f}")
print()

# ---------------------------------------------------------------------------
# Part 2: dislocation.  Shift one cosine lattice by +tau on the right and
# -tau on the left; the derivative mismatch at the junction creates a trap.
lam = -20.0
tau = 0.25
V0 = FunctionDescriptor(const=1.0, cos=((1, 0.5),))
G0 = FunctionDescriptor(const=1.0)
print(f"dislocated lattice: V0 = 1 + 0.5 cos(2 pi x), tau = {tau}, lambda = {lam}")
rep = criteria.dislocation_report(V0, G0, tau, lam)
print(f"criterion verdict: {rep.verdict.value}")
print(f"mismatch integrals: {rep.intermediates['dis_cond1']:.5f} (both orientations equal")
print("for an even potential)")
print()

p11 = ProblemParams(p=3.0, lam=lam)
g = Grid.from_extent(10.0, 0.01)
c1 = solve_ground_state(PeriodicMedium(V0.shifted(tau), G0), p11, g,
                        SolverOptions(tol=1e-6, seed_center=0.0)).energy_c
cd = solve_ground_state(dislocate(V0, G0, tau), p11, g, SolverOptions(tol=1e-6)).energy_c
print(f"half-line energy c1 = c2 = {c1:.4f}")
print(f"dislocation energy c = {cd:.4f}  (gap {c1 - cd:.4f}: the surface state exists)")
