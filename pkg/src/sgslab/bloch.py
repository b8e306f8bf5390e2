"""Floquet analysis of the 1D Hill operator -d^2/dx^2 + V(x) - lambda.

Everything here operates strictly below the bottom of the spectrum, where the
discriminant (trace of the monodromy matrix over one period) exceeds 2 and the
two Floquet solutions split into a decaying and a growing mode

    u_pm(x) = p_pm(x) exp(mp kappa x),   p_pm 1-periodic, positive.

The monodromy matrix is propagated with a fixed-step classical RK4 scheme so
that runs are bit-reproducible; the periodic factors p_pm are integrated from
their own first-order-damped equations in the numerically contracting
direction, which stays well-conditioned even for kappa of order 100.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketFailure, IntegrationFailure, LambdaInSpectrum, PositivityFailure
from .media import FunctionDescriptor

DEFAULT_STEPS = 4096
DEFAULT_SAMPLES = 1025


def _step_count(V: FunctionDescriptor, lam: float, steps: int | None) -> int:
    if steps is not None:
        return int(steps)
    # keep kappa * h small so the per-step error of RK4 stays ~1e-14
    stiffness = math.sqrt(abs(lam) + V.sup_norm() + 1.0)
    return max(DEFAULT_STEPS, 256 * int(math.ceil(stiffness)))


@dataclass(frozen=True)
class MonodromyMatrix:
    """Fundamental solution matrix of -u'' + (V - lambda) u = 0 over [0, 1]."""

    m11: float
    m12: float
    m21: float
    m22: float
    lam: float

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def norm(self) -> float:
        return max(abs(self.m11), abs(self.m12), abs(self.m21), abs(self.m22))


@dataclass(frozen=True, eq=False)
class BlochData:
    """Gap-spectral data of a Hill operator at one lambda below its spectrum."""

    lam: float
    kappa: float
    discriminant: float
    omega: float
    p_plus: np.ndarray     # periodic factor of the mode decaying at +inf, sup-norm 1
    p_minus: np.ndarray    # periodic factor of the mode decaying at -inf, sup-norm 1
    dp_plus: np.ndarray
    dp_minus: np.ndarray
    x: np.ndarray          # uniform closed sample grid on [0, 1]

    @property
    def multiplier_plus(self) -> float:
        return math.exp(-self.kappa)

    @property
    def multiplier_minus(self) -> float:
        return math.exp(self.kappa)

    @property
    def samples(self) -> int:
        return len(self.x)

    def wronskian_samples(self) -> np.ndarray:
        """omega recomputed at every sample point; constant up to quadrature
        noise (the exponential factors cancel in the product)."""
        return (
            self.p_plus * self.dp_minus
            - self.dp_plus * self.p_minus
            + 2.0 * self.kappa * self.p_plus * self.p_minus
        )

    def p_minus_at(self, x) -> np.ndarray:
        """Periodic interpolation of p_minus at arbitrary points."""
        xf = np.asarray(x, dtype=float)
        return np.interp(xf - np.floor(xf), self.x, self.p_minus)

    def p_plus_at(self, x) -> np.ndarray:
        xf = np.asarray(x, dtype=float)
        return np.interp(xf - np.floor(xf), self.x, self.p_plus)


def _rk4_second_order(q, h, y0, dy0, damping, n_sub):
    """Integrate y'' + damping * y' + q(x) y = 0 over a uniform grid.

    q holds coefficient values at half-step resolution (2 * n_total + 1 points
    for n_total = n_sub * (len-1)/... computed by the caller); returns y and y'
    sampled every n_sub steps.
    """
    n_total = (len(q) - 1) // 2
    n_out = n_total // n_sub + 1
    ys = np.empty(n_out)
    dys = np.empty(n_out)
    y, dy = y0, dy0
    ys[0], dys[0] = y, dy
    for i in range(n_total):
        q0, qm, q1 = q[2 * i], q[2 * i + 1], q[2 * i + 2]
        k1y = dy
        k1v = -damping * dy - q0 * y
        y2 = y + 0.5 * h * k1y
        v2 = dy + 0.5 * h * k1v
        k2y = v2
        k2v = -damping * v2 - qm * y2
        y3 = y + 0.5 * h * k2y
        v3 = dy + 0.5 * h * k2v
        k3y = v3
        k3v = -damping * v3 - qm * y3
        y4 = y + h * k3y
        v4 = dy + h * k3v
        k4y = v4
        k4v = -damping * v4 - q1 * y4
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        dy = dy + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if (i + 1) % n_sub == 0:
            j = (i + 1) // n_sub
            ys[j], dys[j] = y, dy
    return ys, dys


def monodromy(V: FunctionDescriptor, lam: float, steps: int | None = None) -> MonodromyMatrix:
    """Propagate the fundamental system of -u'' + (V - lambda) u = 0 from
    x = 0 to x = 1 with fixed-step RK4."""
    n = _step_count(V, lam, steps)
    h = 1.0 / n
    xs = np.linspace(0.0, 1.0, 2 * n + 1)
    q = np.asarray(V(xs), dtype=float) - lam
    # columns (u, u') of the fundamental matrix; u'' = q u
    a11, a21 = 1.0, 0.0   # solution with u(0)=1, u'(0)=0
    a12, a22 = 0.0, 1.0   # solution with u(0)=0, u'(0)=1
    for i in range(n):
        q0, qm, q1 = q[2 * i], q[2 * i + 1], q[2 * i + 2]
        for col in (0, 1):
            y, dy = (a11, a21) if col == 0 else (a12, a22)
            k1y, k1v = dy, q0 * y
            y2, v2 = y + 0.5 * h * k1y, dy + 0.5 * h * k1v
            k2y, k2v = v2, qm * y2
            y3, v3 = y + 0.5 * h * k2y, dy + 0.5 * h * k2v
            k3y, k3v = v3, qm * y3
            y4, v4 = y + h * k3y, dy + h * k3v
            k4y, k4v = v4, q1 * y4
            y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            dy = dy + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            if col == 0:
                a11, a21 = y, dy
            else:
                a12, a22 = y, dy
    M = MonodromyMatrix(m11=a11, m12=a12, m21=a21, m22=a22, lam=lam)
    if not all(map(math.isfinite, (a11, a12, a21, a22))):
        raise IntegrationFailure(f"monodromy propagation diverged at lambda = {lam}")
    # Liouville: det must be 1; the float cancellation error in the 2x2
    # determinant scales with the square of the entry magnitude
    if abs(M.det - 1.0) > 1e-8 * max(1.0, M.norm) ** 2:
        raise IntegrationFailure(
            f"monodromy determinant {M.det} deviates from 1 at lambda = {lam}"
        )
    return M


def discriminant(V: FunctionDescriptor, lam: float, steps: int | None = None) -> float:
    return monodromy(V, lam, steps).trace


def spectrum_min(V: FunctionDescriptor, tol: float = 1e-10) -> float:
    """Bottom of the spectrum: the smallest lambda with discriminant equal
    to 2, located by a scan plus root bracketing."""
    sup = V.sup_norm()
    lo, hi = -sup - 10.0, sup + 10.0
    f = lambda lam: discriminant(V, lam) - 2.0
    grid = np.linspace(lo, hi, 41)
    vals = [f(g) for g in grid]
    if vals[0] <= 0.0:
        raise BracketFailure("discriminant not above 2 at the lower search bound")
    bracket = None
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa > 0.0 >= fb:
            bracket = (a, b)
            break
    if bracket is None:
        raise BracketFailure(
            f"no discriminant sign change in [{lo}, {hi}] for the given potential"
        )
    return float(brentq(f, *bracket, xtol=tol))


def _eigvec(m11, m12, m21, m22, rho):
    """Eigenvector of a 2x2 matrix for eigenvalue rho, picking the
    numerically larger of the two row formulas."""
    v1 = (m12, rho - m11)
    v2 = (rho - m22, m21)
    pick = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
    nrm = math.hypot(*pick)
    if nrm == 0.0:
        raise IntegrationFailure("degenerate monodromy eigenvector")
    return pick[0] / nrm, pick[1] / nrm


def bloch_modes(
    V: FunctionDescriptor,
    lam: float,
    samples: int = DEFAULT_SAMPLES,
    steps: int | None = None,
    check_spectrum: bool = True,
) -> BlochData:
    """Bloch modes of -d^2/dx^2 + V - lambda for lambda below the spectrum.

    kappa is taken as the log of the larger Floquet multiplier (stabler than
    arccosh of half the trace near the band edge); the periodic factors are
    normalized to sup-norm 1 and positive.
    """
    if check_spectrum and lam >= spectrum_min(V):
        raise LambdaInSpectrum(f"lambda = {lam} is not below the spectrum bottom")
    M = monodromy(V, lam, steps)
    delta = M.trace
    if delta <= 2.0:
        raise LambdaInSpectrum(f"discriminant {delta} <= 2 at lambda = {lam}")
    rho_big = delta / 2.0 + math.sqrt(delta * delta / 4.0 - 1.0)
    kappa = math.log(rho_big)

    n_total = _step_count(V, lam, steps)
    n_sub = max(1, int(round(n_total / (samples - 1))))
    n_total = n_sub * (samples - 1)
    h = 1.0 / n_total
    xs2 = np.linspace(0.0, 1.0, 2 * n_total + 1)
    Vs = np.asarray(V(xs2), dtype=float)

    # mode decaying at -inf: eigenvector of M for the large multiplier;
    # its periodic factor obeys p'' + 2 kappa p' + (kappa^2 + lam - V) p = 0,
    # which is contracting when integrated forward.
    u0, du0 = _eigvec(M.m11, M.m12, M.m21, M.m22, rho_big)
    q_minus = kappa * kappa + lam - Vs
    pm, dpm = _rk4_second_order(q_minus, h, u0, du0 - kappa * u0, 2.0 * kappa, n_sub)

    # mode decaying at +inf: eigenvector of M^{-1} for the large multiplier
    # (avoids cancellation in the small eigenvalue of M); its factor is
    # integrated backward from x = 1 using periodicity, again contracting.
    w0, dw0 = _eigvec(M.m22, -M.m12, -M.m21, M.m11, rho_big)
    q_plus = (kappa * kappa + lam - Vs)[::-1]
    pp_rev, dpp_rev = _rk4_second_order(q_plus, h, w0, -(dw0 + kappa * w0), 2.0 * kappa, n_sub)
    pp = pp_rev[::-1].copy()
    dpp = -dpp_rev[::-1]

    x = np.linspace(0.0, 1.0, samples)
    out = []
    for p, dp, label in ((pm, dpm, "p_minus"), (pp, dpp, "p_plus")):
        if not np.all(np.isfinite(p)):
            raise IntegrationFailure(f"{label} integration produced non-finite values")
        if -p.min() > p.max():
            p, dp = -p, -dp
        if p.min() <= 0.0:
            raise PositivityFailure(
                f"{label} changes sign; lambda may not be below the band bottom"
            )
        scale = 1.0 / p.max()
        out.append((p * scale, dp * scale))
    (pm, dpm), (pp, dpp) = out

    omega_samples = pp * dpm - dpp * pm + 2.0 * kappa * pp * pm
    omega = float(omega_samples[0])
    spread = float(np.ptp(omega_samples)) / abs(omega)
    if spread > 1e-6:
        raise IntegrationFailure(f"Wronskian varies by {spread:.2e} along the period")

    return BlochData(
        lam=lam,
        kappa=kappa,
        discriminant=delta,
        omega=omega,
        p_plus=pp,
        p_minus=pm,
        dp_plus=dpp,
        dp_minus=dpm,
        x=x,
    )


def asymptotic_diagnostics(V: FunctionDescriptor, lam: float, samples: int = DEFAULT_SAMPLES):
    """The three quantities controlled in the deep-gap limit: the gap between
    kappa and sqrt|lambda|, the scaled gap minus half the mean of V, and the
    uniform distance of p_minus from 1."""
    bd = bloch_modes(V, lam, samples=samples)
    sl = math.sqrt(abs(lam))
    kappa_gap = bd.kappa - sl
    scaled_gap_error = sl * kappa_gap - 0.5 * V.mean()
    p_minus_deviation = float(np.max(np.abs(bd.p_minus - 1.0)))
    return kappa_gap, scaled_gap_error, p_minus_deviation


def verify_p_representation(bd: BlochData, V: FunctionDescriptor) -> float:
    """Evaluate the periodic-boundary integral representation of p_minus with
    bd's own samples inside the integrals and return the sup-norm mismatch.

    Serves as an independent consistency oracle: a correct p_minus is a fixed
    point of the representation.  Requires lambda < 0 and kappa != sqrt|lambda|
    (the representation is written in that non-degenerate form).
    """
    lam, kappa = bd.lam, bd.kappa
    if lam >= 0.0:
        raise ValueError("representation check requires lambda < 0")
    sl = math.sqrt(-lam)
    if abs(kappa - sl) < 1e-8:
        raise ValueError("representation degenerates when kappa equals sqrt|lambda|")
    x = np.linspace(-1.0, 0.0, bd.samples)
    p = bd.p_minus          # periodic: samples on [0,1] represent [-1,0] as well
    g = p * np.asarray(V(x), dtype=float)
    h = x[1] - x[0]

    def cumtrapz(y):
        out = np.zeros_like(y)
        out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1])) * h
        return out

    i_minus = cumtrapz(np.exp((kappa - sl) * x) * g)
    i_plus = cumtrapz(np.exp((kappa + sl) * x) * g)
    alpha = i_minus[-1] / (2.0 * sl * (math.exp(kappa - sl) - 1.0))
    beta = -i_plus[-1] / (2.0 * sl * (math.exp(kappa + sl) - 1.0))
    rhs = (alpha + i_minus / (2.0 * sl)) * np.exp((-kappa + sl) * x) + (
        beta - i_plus / (2.0 * sl)
    ) * np.exp((-kappa - sl) * x)
    return float(np.max(np.abs(rhs - p)))
