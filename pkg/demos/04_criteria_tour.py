"""A tour of the existence and non-existence criteria.

Solving the interface problem outright is expensive; often a verdict is
available from the coefficients alone.  This script walks through the
cheap tests in increasing order of sophistication, on media where each one
is decisive.  Every criterion returns a report object with the verdict,
all intermediate numbers, and the hypotheses it checked.
"""

import math

from sgslab import criteria
from sgslab.media import FunctionDescriptor, PeriodicMedium, ProblemParams, compose_interface

params = ProblemParams(p=3.0, lam=-1.0)


def show(report):
    print(f"  verdict: {report.verdict.value}")
    for key, val in report.intermediates.items():
        if isinstance(val, float):
            print(f"    {key} = {val:.6g}")
    print()


# ---------------------------------------------------------------------------
# 1. Coefficient ordering: if the right side has both a higher potential and
#    a weaker nonlinearity, no surface state can exist -- trial states always
#    do better by sliding off to the left.
print("1. pointwise coefficient ordering (non-existence)")
m = compose_interface(
    PeriodicMedium(FunctionDescriptor(const=1.5), FunctionDescriptor(const=1.0)),
    PeriodicMedium(FunctionDescriptor(const=1.0), FunctionDescriptor(const=2.0)),
)
show(criteria.nonexistence_check(m))

# ---------------------------------------------------------------------------
# 2. Mode-weighted mismatch integral: weight the potential jump V2 - V1 by
#    the squared decaying Bloch mode of side 1.  Strictly negative means the
#    half-line state lowers its energy by leaking across the junction.
print("2. mode-weighted potential-mismatch integral (existence)")
rep = criteria.bloch_integral_criterion(
    FunctionDescriptor(const=1.0), FunctionDescriptor(const=0.5), params.lam
)
closed = -0.5 * (1 - math.exp(-2 * math.sqrt(2))) / (2 * math.sqrt(2))
show(rep)
print(f"    closed form for constant coefficients: {closed:.6f}")
print()

# ---------------------------------------------------------------------------
# 3. Interface-point comparison: in the strongly negative spectral-parameter
#    limit only the coefficient values right at x = 0 matter.
print("3. interface-point comparison (asymptotic existence)")
show(criteria.boundary_condition(FunctionDescriptor(const=1.0), FunctionDescriptor(const=0.5)))

# ---------------------------------------------------------------------------
# 4. Frequency-scaled pairs: a medium next to its k-fold compressed copy.
#    The two half-line energies are related by an exact power law, so the
#    ordering is decided by k and the nonlinearity scale gamma alone.
print("4. frequency-scaled pair (existence, with exact energy ratio)")
m2 = PeriodicMedium(FunctionDescriptor(const=1.0, cos=((1, 0.3),)), FunctionDescriptor(const=1.0))
show(criteria.scaled_interface_check(m2, 2, 4.0, ProblemParams(p=3.0, lam=0.0)))

# ---------------------------------------------------------------------------
# 5. Nonlinearity-jump threshold: how strong must the side-1 nonlinear
#    coefficient be, uniformly, to force existence when V2 < V1 everywhere?
print("5. nonlinearity-jump threshold")
c1_unit = 4.0 / 3.0
c2 = 0.5**1.5 * 4.0 / 3.0
beta0, rep = criteria.large_jump_beta0(c2, c1_unit, ProblemParams(p=3.0, lam=0.0))
print(f"  threshold beta0 = {beta0:.6f}: any Gamma1 >= beta0 certifies")
print()

# ---------------------------------------------------------------------------
# 6. Dislocation: the same medium on both sides, shifted by +tau and -tau.
print("6. dislocated cosine potential, tau = 0.25, lambda = -20")
show(
    criteria.dislocation_report(
        FunctionDescriptor(const=1.0, cos=((1, 0.5),)),
        FunctionDescriptor(const=1.0),
        0.25,
        -20.0,
    )
)
