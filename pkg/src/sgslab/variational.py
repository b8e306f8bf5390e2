"""Discretized energy functionals on a truncated line and the constrained
gradient solver for ground states.

The continuum problem minimizes

    J[u] = int 1/2 (u'^2 + (V - lambda) u^2) - Gamma |u|^{p+1} / (p+1)

over the constraint set N = {u != 0 : G[u] = 0} with
G[u] = int u'^2 + (V - lambda) u^2 - Gamma |u|^{p+1}.  On N the energy reduces
to J = eta * int (u'^2 + (V - lambda) u^2) with eta = 1/2 - 1/(p+1).

Discretization: homogeneous Dirichlet truncation to [-L, L], trapezoid
quadrature for the zeroth-order terms, and the kinetic term as the sum of
squared edge differences — the nearest-neighbour stencil keeps the discrete
quadratic form positive definite (no checkerboard null modes), which a wide
central-difference square would not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import bloch
from .errors import (
    NoConvergence,
    NonprojectableState,
    SpectralAssumptionViolated,
    TailNotResolved,
)
from .media import (
    FunctionDescriptor,
    InterfaceMedium,
    PeriodicMedium,
    ProblemParams,
    eval_medium,
)


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid over [-L_dom, L_dom] with x = 0 a node."""

    L_dom: float
    h: float
    nodes: int

    def __post_init__(self):
        if self.nodes % 2 != 1:
            raise ValueError("node count must be odd so that x = 0 is a node")
        if abs((self.nodes - 1) * self.h - 2.0 * self.L_dom) > 1e-9 * max(1.0, self.L_dom):
            raise ValueError("nodes * h does not span [-L_dom, L_dom]")

    @classmethod
    def from_extent(cls, L_dom: float, h: float) -> "Grid":
        """Round the node count up to the nearest odd value and adjust h so the
        grid lands exactly on [-L_dom, L_dom]."""
        half = max(1, int(math.ceil(L_dom / h)))
        nodes = 2 * half + 1
        return cls(L_dom=L_dom, h=2.0 * L_dom / (nodes - 1), nodes=nodes)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.L_dom, self.L_dom, self.nodes)


@dataclass(frozen=True)
class GridFunction:
    """Real-valued function samples with homogeneous Dirichlet ends."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if len(v) != self.grid.nodes:
            raise ValueError("value count does not match the grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite values")

    def with_values(self, v: np.ndarray) -> "GridFunction":
        v = np.array(v, dtype=float)
        v[0] = 0.0
        v[-1] = 0.0
        return GridFunction(grid=self.grid, values=v)

    @classmethod
    def from_callable(cls, grid: Grid, f) -> "GridFunction":
        v = np.asarray(f(grid.x), dtype=float)
        v = v.copy()
        v[0] = 0.0
        v[-1] = 0.0
        return cls(grid=grid, values=v)


@dataclass
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 50_000
    seed_center: float | None = None
    check_spectrum: bool = True
    tail_fit: bool = True
    # strict=False returns the best state found when the budget runs out
    # instead of raising; used in regimes where the infimum is approached by
    # a drifting sequence and the gradient floors at rounding noise
    strict: bool = True


@dataclass(frozen=True)
class GroundStateResult:
    state: GridFunction
    energy_c: float
    nehari_scale_s: float
    residual: float
    iterations: int
    center_of_mass: float
    d_plus: float | None = None
    d_minus: float | None = None
    decay_rate_fit: float | None = None


def _medium_arrays(m, grid: Grid):
    V, G = eval_medium(m, grid.x)
    return np.asarray(V, dtype=float), np.asarray(G, dtype=float)


def _trap_weights(grid: Grid) -> np.ndarray:
    w = np.full(grid.nodes, grid.h)
    w[0] = w[-1] = 0.5 * grid.h
    return w


def _quadratic_form(u: np.ndarray, Vl: np.ndarray, w: np.ndarray, h: float) -> float:
    """Discrete int u'^2 + (V - lambda) u^2 (edge-difference kinetic term)."""
    kin = float(np.sum(np.diff(u) ** 2)) / h
    pot = float(np.sum(w * Vl * u * u))
    return kin + pot


def _nonlinear_mass(u: np.ndarray, G: np.ndarray, w: np.ndarray, p: float) -> float:
    return float(np.sum(w * G * np.abs(u) ** (p + 1)))


def J_eval(u: GridFunction, m, params: ProblemParams) -> float:
    """Discrete energy functional."""
    V, G = _medium_arrays(m, u.grid)
    w = _trap_weights(u.grid)
    quad = _quadratic_form(u.values, V - params.lam, w, u.grid.h)
    nl = _nonlinear_mass(u.values, G, w, params.p)
    return 0.5 * quad - nl / (params.p + 1.0)


def G_eval(u: GridFunction, m, params: ProblemParams) -> float:
    """Discrete constraint functional; zero on the constraint set."""
    V, G = _medium_arrays(m, u.grid)
    w = _trap_weights(u.grid)
    quad = _quadratic_form(u.values, V - params.lam, w, u.grid.h)
    nl = _nonlinear_mass(u.values, G, w, params.p)
    return quad - nl


def nehari_project(u: GridFunction, m, params: ProblemParams):
    """Scale u onto the constraint set: s^{p-1} = quad form / nonlinear mass."""
    V, G = _medium_arrays(m, u.grid)
    w = _trap_weights(u.grid)
    quad = _quadratic_form(u.values, V - params.lam, w, u.grid.h)
    nl = _nonlinear_mass(u.values, G, w, params.p)
    if nl <= 0.0:
        raise NonprojectableState(
            f"nonlinear mass {nl} is not positive; state cannot be scaled onto the constraint set"
        )
    if quad <= 0.0:
        raise NonprojectableState(
            f"quadratic form {quad} is not positive; lambda may not be below the spectrum"
        )
    s = (quad / nl) ** (1.0 / (params.p - 1.0))
    return u.with_values(s * u.values), s


def grad_J(u: GridFunction, m, params: ProblemParams) -> np.ndarray:
    """Exact gradient of the discrete J with respect to interior node values.

    Returned as a full-length array with zero boundary entries; interior entry
    j equals h times the strong-form residual
    -u'' + (V - lambda) u - Gamma |u|^{p-1} u at node j (second-order stencil).
    """
    V, G = _medium_arrays(m, u.grid)
    w = _trap_weights(u.grid)
    v = u.values
    h = u.grid.h
    g = np.zeros_like(v)
    g[1:-1] = -(v[2:] - 2.0 * v[1:-1] + v[:-2]) / h
    g[1:-1] += w[1:-1] * (
        (V[1:-1] - params.lam) * v[1:-1] - G[1:-1] * np.abs(v[1:-1]) ** (params.p - 1.0) * v[1:-1]
    )
    return g


def _seed(grid: Grid, m, params: ProblemParams, center: float | None) -> GridFunction:
    if center is None:
        center = 0.0 if isinstance(m, InterfaceMedium) else 0.5
    V, _ = _medium_arrays(m, grid)
    vbar = float(np.mean(V))
    width = 1.0 / math.sqrt(max(vbar - params.lam, 0.25))
    vals = np.exp(-((grid.x - center) / width) ** 2)
    vals[0] = vals[-1] = 0.0
    return GridFunction(grid=grid, values=vals)


def _validate_spectrum(m, lam: float):
    sides = (m.side1, m.side2) if isinstance(m, InterfaceMedium) else (m,)
    for i, side in enumerate(sides, start=1):
        bottom = bloch.spectrum_min(side.V)
        if lam >= bottom:
            raise SpectralAssumptionViolated(
                f"lambda = {lam} is not below the spectrum bottom {bottom} of side {i}"
            )


def _reduced_objective(v_int, template: GridFunction, m, params: ProblemParams):
    """Energy after projection onto the constraint set, as a function of the
    interior node values, with its exact gradient.

    Because the projection scale s solves d/ds J(s u) = 0, the envelope
    theorem gives grad (J o project)(u) = s * grad J(s u).  Non-projectable
    points get a large sentinel value so line searches back away from them.
    """
    u = template.with_values(np.concatenate(([0.0], v_int, [0.0])))
    try:
        proj, s = nehari_project(u, m, params)
    except NonprojectableState:
        return 1e12, np.zeros_like(v_int)
    e = J_eval(proj, m, params)
    g = s * grad_J(proj, m, params)
    return e, g[1:-1]


def solve_ground_state(
    m, params: ProblemParams, grid: Grid, opts: SolverOptions | None = None
) -> GroundStateResult:
    """Constrained gradient descent for the energy minimizer.

    The primary iteration is u <- project(u - alpha * grad J(u)) with
    Barzilai-Borwein steps clamped to [1e-6, 1e2] and nonmonotone acceptance
    against the worst of the last 10 energies.  The Barzilai-Borwein
    trajectory is chaotic, so if it stagnates the solver finishes with a
    quasi-Newton polish of the projected energy (same minimizers, exact
    gradient via the envelope theorem).  The residual is the discrete L2 norm
    of the interior strong-form residual.
    """
    opts = opts or SolverOptions()
    if opts.check_spectrum:
        _validate_spectrum(m, params.lam)

    u = _seed(grid, m, params, opts.seed_center)
    u, s = nehari_project(u, m, params)
    h = grid.h

    def res_norm(grad):
        return float(np.linalg.norm(grad[1:-1] / h)) * math.sqrt(h)

    it = 0
    residual = math.inf
    converged = False
    while it < opts.max_iter and not converged:
        # ---- Barzilai-Borwein phase ----
        energy = J_eval(u, m, params)
        g = grad_J(u, m, params)
        alpha = 0.1
        recent_energies = [energy]
        prev_v = prev_g = None
        best_residual = math.inf
        last_improvement = it
        while it < opts.max_iter:
            it += 1
            residual = res_norm(g)
            if residual < opts.tol:
                converged = True
                break
            if residual < 0.5 * best_residual:
                best_residual = residual
                last_improvement = it
            if it - last_improvement > 1500:
                break  # stagnation: hand over to the quasi-Newton polish
            if prev_v is not None:
                dv = u.values - prev_v
                dg = g - prev_g
                denom = float(np.dot(dv, dg))
                if denom > 0.0:
                    alpha = float(np.dot(dv, dv)) / denom
                alpha = min(max(alpha, 1e-6), 1e2)
            prev_v, prev_g = u.values, g
            reference = max(recent_energies)
            trial_alpha = alpha
            nxt = None
            for _ in range(40):
                try:
                    cand, s_cand = nehari_project(
                        u.with_values(u.values - trial_alpha * g), m, params
                    )
                except NonprojectableState:
                    trial_alpha *= 0.5
                    continue
                e_cand = J_eval(cand, m, params)
                if nxt is None:
                    nxt, e_new, s = cand, e_cand, s_cand
                if e_cand <= reference + 1e-14 * max(1.0, abs(reference)):
                    nxt, e_new, s = cand, e_cand, s_cand
                    break
                trial_alpha *= 0.5
            if nxt is None:
                raise NoConvergence(
                    "no projectable step found", iterations=it, residual=residual
                )
            u, energy = nxt, e_new
            recent_energies.append(energy)
            if len(recent_energies) > 10:
                recent_energies.pop(0)
            g = grad_J(u, m, params)
        if converged or it >= opts.max_iter:
            break

        # ---- quasi-Newton polish, then restart the primary iteration ----
        budget = max(opts.max_iter - it, 1000)
        res = minimize(
            _reduced_objective,
            u.values[1:-1],
            args=(u, m, params),
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": budget,
                "maxfun": 3 * budget,
                "gtol": 1e-16,
                "ftol": 1e-18,
            },
        )
        it += max(int(res.nit), 1)
        u, s = nehari_project(
            u.with_values(np.concatenate(([0.0], res.x, [0.0]))), m, params
        )
        residual = res_norm(grad_J(u, m, params))
        converged = residual < opts.tol

    energy = J_eval(u, m, params)
    if not converged and opts.strict:
        raise NoConvergence(
            f"residual {residual:.3e} above tolerance {opts.tol} after {it} iterations",
            iterations=it,
            residual=residual,
        )

    # sign normalization: make the dominant node positive
    v = u.values
    peak = int(np.argmax(np.abs(v)))
    if v[peak] < 0.0:
        u = u.with_values(-v)
        v = u.values

    w = _trap_weights(grid)
    mass = float(np.sum(w * v * v))
    com = float(np.sum(w * grid.x * v * v)) / mass if mass > 0.0 else 0.0

    decay = None
    if opts.tail_fit:
        decay = _fit_decay_rate(grid, v)

    return GroundStateResult(
        state=u,
        energy_c=energy,
        nehari_scale_s=s,
        residual=residual,
        iterations=it,
        center_of_mass=com,
        decay_rate_fit=decay,
    )


def _fit_decay_rate(grid: Grid, v: np.ndarray) -> float | None:
    """Least-squares slope of log|u| over the outer 20% of the domain,
    averaged over the two tails; None where the tail is at round-off."""
    n = grid.nodes
    k = max(4, n // 5)
    rates = []
    for sl, sign in ((slice(1, k), 1.0), (slice(n - k, n - 1), -1.0)):
        seg = np.abs(v[sl])
        if seg.min() < 1e-14 * max(1.0, np.abs(v).max()):
            continue
        xs = grid.x[sl]
        slope = np.polyfit(xs, np.log(seg), 1)[0]
        rates.append(sign * slope)
    if not rates:
        return None
    return float(np.mean(rates))


def d_coefficients(
    w: GridFunction, bd: bloch.BlochData, Gamma: FunctionDescriptor, params: ProblemParams
):
    """Tail coefficients of a decaying profile against the Bloch modes.

    d_minus governs the x -> -inf tail (w ~ d_minus * p_minus e^{kappa x}) and
    d_plus the x -> +inf tail; both come from weighting Gamma w^p with the
    opposite mode and dividing by the Wronskian.
    """
    grid = w.grid
    v = w.values
    vmax = float(np.abs(v).max())
    if vmax > 0.0 and max(abs(v[1]), abs(v[-2])) > 1e-6 * vmax:
        raise TailNotResolved(
            "profile has not decayed below 1e-6 of its peak at the grid boundary"
        )
    x = grid.x
    weights = _trap_weights(grid)
    gw = np.asarray(Gamma(x), dtype=float) * np.abs(v) ** (params.p - 1.0) * v
    u_plus = bd.p_plus_at(x) * np.exp(-bd.kappa * x)
    u_minus = bd.p_minus_at(x) * np.exp(bd.kappa * x)
    d_minus = float(np.sum(weights * u_plus * gw)) / bd.omega
    d_plus = float(np.sum(weights * u_minus * gw)) / bd.omega
    return d_plus, d_minus


def envelope_check(
    w: GridFunction, bd: bloch.BlochData, x0: float, epsilon_shift: float = 0.0
):
    """Pointwise exponential-envelope bound with the periodic-factor
    oscillation constant P = max of (sup p)/(inf p) over the two modes.

    bd should be computed at lambda + epsilon_shift; the check allows a 5%
    multiplicative slack.  Returns (holds, margin) where margin is the minimum
    of bound/value over the tested nodes (+inf if the tail vanishes)."""
    P = max(
        float(bd.p_plus.max() / bd.p_plus.min()),
        float(bd.p_minus.max() / bd.p_minus.min()),
    )
    x = w.grid.x
    core = np.abs(x) <= x0
    tail = ~core
    peak = float(np.abs(w.values[core]).max())
    bound = 1.05 * P * peak * np.exp(-bd.kappa * (np.abs(x[tail]) - x0))
    vals = np.abs(w.values[tail])
    nz = vals > 0.0
    if not np.any(nz):
        return True, math.inf
    ratios = bound[nz] / vals[nz]
    margin = float(ratios.min())
    return margin >= 1.0, margin
