"""Independent closed-form and brute-force references.

These deliberately avoid the main code paths (different quadrature
resolution, direct formulas) so tests can cross-validate the library against
something it does not share internals with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import BlochData
from .errors import LambdaInSpectrum, NonprojectableState
from .media import ProblemParams
from .variational import Grid, GridFunction, J_eval, nehari_project


def closed_form_soliton(m: float, Gamma0: float, p: float, grid: Grid):
    """Exact homoclinic profile of -w'' + m w = Gamma0 w^p and its energy.

    w(x) = (m (p+1) / (2 Gamma0))^{1/(p-1)} sech^{2/(p-1)}((p-1) sqrt(m) x / 2).
    The energy eta * int (w'^2 + m w^2) is computed by trapezoid quadrature on
    a 10x refined copy of the grid with the analytic derivative.
    """
    if m <= 0 or Gamma0 <= 0 or p <= 1:
        raise ValueError("need m > 0, Gamma0 > 0, p > 1")
    amp = (m * (p + 1.0) / (2.0 * Gamma0)) ** (1.0 / (p - 1.0))
    rate = (p - 1.0) * math.sqrt(m) / 2.0
    expo = 2.0 / (p - 1.0)

    def w(x):
        return amp * np.cosh(rate * np.asarray(x, dtype=float)) ** (-expo)

    def dw(x):
        x = np.asarray(x, dtype=float)
        return -amp * expo * rate * np.tanh(rate * x) * np.cosh(rate * x) ** (-expo)

    fine_n = 10 * (grid.nodes - 1) + 1
    xf = np.linspace(-grid.L_dom, grid.L_dom, fine_n)
    hf = xf[1] - xf[0]
    integrand = dw(xf) ** 2 + m * w(xf) ** 2
    eta = 0.5 - 1.0 / (p + 1.0)
    c_exact = eta * float(np.trapezoid(integrand, dx=hf))
    return GridFunction.from_callable(grid, w), c_exact


def constant_bloch_reference(v0: float, lam: float, samples: int = 1025) -> BlochData:
    """Gap-spectral data of the constant-coefficient operator: periodic
    factors identically 1, kappa = sqrt(v0 - lambda)."""
    if lam >= v0:
        raise LambdaInSpectrum(f"lambda = {lam} is not below the spectrum bottom {v0}")
    kappa = math.sqrt(v0 - lam)
    ones = np.ones(samples)
    zeros = np.zeros(samples)
    return BlochData(
        lam=lam,
        kappa=kappa,
        discriminant=2.0 * math.cosh(kappa),
        omega=2.0 * kappa,
        p_plus=ones,
        p_minus=ones.copy(),
        dp_plus=zeros,
        dp_minus=zeros.copy(),
        x=np.linspace(0.0, 1.0, samples),
    )


@dataclass(frozen=True)
class AnsatzFamily:
    """Cartesian grid of sech-shaped trial profiles."""

    amplitude_range: tuple[float, float]
    width_range: tuple[float, float]
    center_range: tuple[float, float]
    resolution: int = 9

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")

    def axes(self):
        return (
            np.linspace(*self.amplitude_range, self.resolution),
            np.linspace(*self.width_range, self.resolution),
            np.linspace(*self.center_range, self.resolution),
        )


def ansatz_upper_bound(m, params: ProblemParams, fam: AnsatzFamily, grid: Grid) -> float:
    """Brute-force upper bound on the constrained minimum: project every trial
    profile onto the constraint set and take the least energy.

    Trials whose nonlinear mass is nonpositive are skipped.  The scan order is
    fixed, so the reduction is deterministic.
    """
    amps, widths, centers = fam.axes()
    expo = 2.0 / (params.p - 1.0)
    best = math.inf
    x = grid.x
    for a in amps:
        for wdt in widths:
            for ctr in centers:
                vals = a * np.cosh(wdt * (x - ctr)) ** (-expo)
                vals[0] = vals[-1] = 0.0
                trial = GridFunction(grid=grid, values=vals)
                try:
                    proj, _ = nehari_project(trial, m, params)
                except NonprojectableState:
                    continue
                e = J_eval(proj, m, params)
                if e < best:
                    best = e
    return best
