"""1-periodic coefficient descriptors and the media built from them.

Coefficients are kept symbolic (trigonometric polynomials or piecewise
constants on [0, 1)) rather than as sampled arrays: the interface criteria
need exact point values and one-sided derivatives at x = 0, which sampling
cannot provide robustly.  All types are immutable value objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import H2Violation, InvalidScale, NotDifferentiable

TWO_PI = 2.0 * math.pi

# tolerance for merging piecewise breakpoints that coincide up to rounding
_BREAK_TOL = 1e-12


def _frac(x):
    return x - math.floor(x)


@dataclass(frozen=True)
class FunctionDescriptor:
    """A bounded 1-periodic real function.

    Either trigonometric,

        f(x) = const + sum_a amp * cos(2 pi n x) + sum_b amp * sin(2 pi n x),

    or piecewise constant on half-open segments [a, b) partitioning [0, 1).
    The two families are never mixed in one descriptor.
    """

    const: float = 0.0
    cos: tuple = ()        # ((frequency, amplitude), ...)
    sin: tuple = ()
    segments: tuple = ()   # ((a, b, value), ...), half-open, covering [0, 1)

    def __post_init__(self):
        object.__setattr__(self, "cos", tuple((int(n), float(a)) for n, a in self.cos))
        object.__setattr__(self, "sin", tuple((int(n), float(a)) for n, a in self.sin))
        object.__setattr__(
            self, "segments", tuple((float(a), float(b), float(v)) for a, b, v in self.segments)
        )
        object.__setattr__(self, "const", float(self.const))
        for n, _ in self.cos + self.sin:
            if n < 1:
                raise ValueError(f"trigonometric frequency must be a positive integer, got {n}")
        if self.segments:
            if self.const != 0.0 or self.cos or self.sin:
                raise ValueError("descriptor mixes piecewise segments with trigonometric terms")
            segs = sorted(self.segments)
            if abs(segs[0][0]) > _BREAK_TOL or abs(segs[-1][1] - 1.0) > _BREAK_TOL:
                raise ValueError("piecewise segments must cover [0, 1)")
            for (a0, b0, _), (a1, _, _) in zip(segs, segs[1:]):
                if abs(b0 - a1) > _BREAK_TOL:
                    raise ValueError("piecewise segments must partition [0, 1) without gaps or overlap")
            for a, b, _ in segs:
                if not b > a:
                    raise ValueError("piecewise segment must have positive length")
            object.__setattr__(self, "segments", tuple(segs))

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def constant(v: float) -> "FunctionDescriptor":
        return FunctionDescriptor(const=v)

    @staticmethod
    def piecewise(values_and_breaks) -> "FunctionDescriptor":
        """Build from ((a, b, value), ...) triples."""
        return FunctionDescriptor(segments=tuple(values_and_breaks))

    @property
    def is_piecewise(self) -> bool:
        return bool(self.segments)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        scalar = xs.ndim == 0
        xs = np.atleast_1d(xs)
        if self.segments:
            xf = xs - np.floor(xs)
            out = np.empty_like(xf)
            for a, b, v in self.segments:
                out[(xf >= a - _BREAK_TOL) & (xf < b - _BREAK_TOL)] = v
            # points rounding onto x = 1 wrap to the first segment
            out[xf >= 1.0 - _BREAK_TOL] = self.segments[0][2]
        else:
            # reduce to the fundamental period first: makes evaluation at x
            # and x + 1 bit-identical and keeps the trig arguments small
            xf = xs - np.floor(xs)
            out = np.full_like(xf, self.const)
            for n, a in self.cos:
                out += a * np.cos(TWO_PI * n * xf)
            for n, a in self.sin:
                out += a * np.sin(TWO_PI * n * xf)
        return float(out[0]) if scalar else out

    def derivative(self, x: float, order: int = 1) -> float:
        """Pointwise derivative; piecewise descriptors are flat inside segments
        and not differentiable at breakpoints."""
        if self.segments:
            xf = _frac(x)
            for a, b, _ in self.segments:
                if min(abs(xf - a), abs(xf - b), abs(xf - a - 1.0), abs(xf - b + 1.0)) < _BREAK_TOL:
                    raise NotDifferentiable(
                        f"piecewise descriptor has a breakpoint at x = {x}"
                    )
            return 0.0
        out = 0.0
        for n, a in self.cos:
            w = TWO_PI * n
            if order == 1:
                out += -a * w * math.sin(w * x)
            elif order == 2:
                out += -a * w * w * math.cos(w * x)
            else:
                raise ValueError("only first and second derivatives supported")
        for n, a in self.sin:
            w = TWO_PI * n
            if order == 1:
                out += a * w * math.cos(w * x)
            elif order == 2:
                out += -a * w * w * math.sin(w * x)
        return out

    # -- algebra on descriptors ----------------------------------------------

    def times(self, c: float) -> "FunctionDescriptor":
        if self.segments:
            return FunctionDescriptor(segments=tuple((a, b, c * v) for a, b, v in self.segments))
        return FunctionDescriptor(
            const=c * self.const,
            cos=tuple((n, c * a) for n, a in self.cos),
            sin=tuple((n, c * a) for n, a in self.sin),
        )

    def plus(self, c: float) -> "FunctionDescriptor":
        if self.segments:
            return FunctionDescriptor(segments=tuple((a, b, v + c) for a, b, v in self.segments))
        return FunctionDescriptor(const=self.const + c, cos=self.cos, sin=self.sin)

    def shifted(self, delta: float) -> "FunctionDescriptor":
        """Descriptor of x -> f(x + delta); the shift is absorbed into the
        coefficients (trig phase rotation / rotation of segment boundaries)."""
        if delta == 0.0:
            return self
        if self.segments:
            return self._remap(lambda x: x + delta, [a - delta for a, _, _ in self.segments])
        cosd: dict[int, float] = {}
        sind: dict[int, float] = {}
        for n, a in self.cos:
            c, s = math.cos(TWO_PI * n * delta), math.sin(TWO_PI * n * delta)
            cosd[n] = cosd.get(n, 0.0) + a * c
            sind[n] = sind.get(n, 0.0) - a * s
        for n, a in self.sin:
            c, s = math.cos(TWO_PI * n * delta), math.sin(TWO_PI * n * delta)
            sind[n] = sind.get(n, 0.0) + a * c
            cosd[n] = cosd.get(n, 0.0) + a * s
        return FunctionDescriptor(
            const=self.const,
            cos=tuple(sorted((n, a) for n, a in cosd.items() if a != 0.0)),
            sin=tuple(sorted((n, a) for n, a in sind.items() if a != 0.0)),
        )

    def frequency_scaled(self, k: int) -> "FunctionDescriptor":
        """Descriptor of x -> f(k x) for integer k >= 1 (still 1-periodic)."""
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise InvalidScale(f"scaling factor must be a positive integer, got {k}")
        if self.segments:
            segs = []
            for j in range(k):
                for a, b, v in self.segments:
                    segs.append(((a + j) / k, (b + j) / k, v))
            return FunctionDescriptor(segments=tuple(segs))
        return FunctionDescriptor(
            const=self.const,
            cos=tuple((n * k, a) for n, a in self.cos),
            sin=tuple((n * k, a) for n, a in self.sin),
        )

    def reflected(self) -> "FunctionDescriptor":
        """Descriptor of x -> f(-x)."""
        if self.segments:
            return self._remap(lambda x: -x, [-b for _, b, _ in self.segments])
        return FunctionDescriptor(
            const=self.const,
            cos=self.cos,
            sin=tuple((n, -a) for n, a in self.sin),
        )

    def sub(self, other: "FunctionDescriptor") -> "FunctionDescriptor":
        """Pointwise difference self - other (within one descriptor family)."""
        if self.segments and other.segments:
            breaks = sorted(
                {round(_frac(a), 15) for a, _, _ in self.segments}
                | {round(_frac(a), 15) for a, _, _ in other.segments}
            )
            segs = []
            pts = list(breaks) + [1.0]
            for l, r in zip(pts, pts[1:]):
                if r - l > _BREAK_TOL:
                    mid = 0.5 * (l + r)
                    segs.append((l, r, float(self(mid)) - float(other(mid))))
            return FunctionDescriptor(segments=tuple(segs))
        if not self.segments and not other.segments:
            cosd: dict[int, float] = {}
            sind: dict[int, float] = {}
            for n, a in self.cos:
                cosd[n] = cosd.get(n, 0.0) + a
            for n, a in other.cos:
                cosd[n] = cosd.get(n, 0.0) - a
            for n, a in self.sin:
                sind[n] = sind.get(n, 0.0) + a
            for n, a in other.sin:
                sind[n] = sind.get(n, 0.0) - a
            return FunctionDescriptor(
                const=self.const - other.const,
                cos=tuple(sorted((n, a) for n, a in cosd.items() if a != 0.0)),
                sin=tuple(sorted((n, a) for n, a in sind.items() if a != 0.0)),
            )
        raise ValueError("cannot subtract a piecewise from a trigonometric descriptor")

    def _remap(self, transform, candidate_breaks) -> "FunctionDescriptor":
        """Rebuild a piecewise descriptor for x -> f(transform(x)); the new
        breakpoints are the preimages in candidate_breaks, folded into [0, 1)."""
        pts = sorted({_frac(p) for p in candidate_breaks} | {0.0})
        merged = [pts[0]]
        for p in pts[1:]:
            if p - merged[-1] > _BREAK_TOL:
                merged.append(p)
        if merged and 1.0 - merged[-1] <= _BREAK_TOL:
            merged.pop()
        segs = []
        bounds = merged + [1.0]
        for l, r in zip(bounds, bounds[1:]):
            mid = 0.5 * (l + r)
            segs.append((l, r, float(self(transform(mid)))))
        return FunctionDescriptor(segments=tuple(segs))

    # -- exact range information ----------------------------------------------

    def sup_bound(self) -> float:
        """Upper bound on sup f; exact for piecewise and single-harmonic
        descriptors, an amplitude-sum bound otherwise."""
        if self.segments:
            return max(v for _, _, v in self.segments)
        return self.const + self._amplitude_sum()

    def inf_bound(self) -> float:
        """Lower bound on inf f, with the same exactness as sup_bound."""
        if self.segments:
            return min(v for _, _, v in self.segments)
        return self.const - self._amplitude_sum()

    def _amplitude_sum(self) -> float:
        amps: dict[int, list[float]] = {}
        for n, a in self.cos:
            amps.setdefault(n, [0.0, 0.0])[0] += a
        for n, a in self.sin:
            amps.setdefault(n, [0.0, 0.0])[1] += a
        return sum(math.hypot(a, b) for a, b in amps.values())

    def sup_norm(self) -> float:
        return max(abs(self.sup_bound()), abs(self.inf_bound()))

    def mean(self) -> float:
        """Exact average over one period."""
        if self.segments:
            return sum((b - a) * v for a, b, v in self.segments)
        return self.const

    def sample_max(self, n: int = 4096) -> float:
        xs = (np.arange(n) + 0.5) / n
        return float(np.max(self(xs)))

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {}
        if self.segments:
            out["segments"] = [[a, b, v] for a, b, v in self.segments]
            return out
        out["const"] = self.const
        if self.cos:
            out["cos"] = [[n, a] for n, a in self.cos]
        if self.sin:
            out["sin"] = [[n, a] for n, a in self.sin]
        return out

    @staticmethod
    def from_json(data) -> "FunctionDescriptor":
        if isinstance(data, (int, float)):
            return FunctionDescriptor.constant(float(data))
        if not isinstance(data, dict):
            raise ValueError(f"descriptor must be a number or an object, got {type(data).__name__}")
        known = {"const", "cos", "sin", "segments"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown descriptor fields: {sorted(unknown)}")
        return FunctionDescriptor(
            const=data.get("const", 0.0),
            cos=tuple((n, a) for n, a in data.get("cos", ())),
            sin=tuple((n, a) for n, a in data.get("sin", ())),
            segments=tuple((a, b, v) for a, b, v in data.get("segments", ())),
        )


@dataclass(frozen=True)
class PeriodicMedium:
    """One side of the problem: a (V, Gamma) pair of 1-periodic coefficients.

    Gamma must take a positive value somewhere on the period (hypothesis that
    makes the constraint set nonempty); construction fails otherwise.
    """

    V: FunctionDescriptor
    Gamma: FunctionDescriptor

    def __post_init__(self):
        if self.Gamma.is_piecewise:
            attained = max(v for _, _, v in self.Gamma.segments)
        else:
            attained = self.Gamma.sample_max()
        if attained <= 0.0:
            raise H2Violation("sup of Gamma over one period must be strictly positive")


@dataclass(frozen=True)
class InterfaceMedium:
    """Two periodic media glued along x = 0: side1 governs x > 0, side2
    governs x < 0.  Evaluation at x = 0 uses side1 (a measure-zero convention
    with no effect on integrals; fixed for reproducibility)."""

    side1: PeriodicMedium
    side2: PeriodicMedium


Medium = PeriodicMedium | InterfaceMedium


def eval_medium(m: Medium, x):
    """Evaluate (V(x), Gamma(x)); for an interface, dispatch on the sign of x."""
    if isinstance(m, PeriodicMedium):
        return m.V(x), m.Gamma(x)
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    pos = xs >= 0.0
    V = np.where(pos, m.side1.V(xs), m.side2.V(xs))
    G = np.where(pos, m.side1.Gamma(xs), m.side2.Gamma(xs))
    if scalar:
        return float(V[0]), float(G[0])
    return V, G


def compose_interface(m1: PeriodicMedium, m2: PeriodicMedium) -> InterfaceMedium:
    """Glue two periodic media; m1 is used for x > 0, m2 for x < 0."""
    return InterfaceMedium(side1=m1, side2=m2)


def dislocate(
    V0: FunctionDescriptor, Gamma0: FunctionDescriptor, tau: float, sigma: float | None = None
) -> InterfaceMedium:
    """Dislocation interface: V0 shifted by +tau on x > 0 and by -tau on x < 0
    (and Gamma0 by +/-sigma; sigma defaults to tau)."""
    if sigma is None:
        sigma = tau
    side1 = PeriodicMedium(V=V0.shifted(tau), Gamma=Gamma0.shifted(sigma))
    side2 = PeriodicMedium(V=V0.shifted(-tau), Gamma=Gamma0.shifted(-sigma))
    return InterfaceMedium(side1=side1, side2=side2)


def scaled_pair(m2: PeriodicMedium, k: int, gamma: float) -> PeriodicMedium:
    """The companion medium V1(x) = k^2 V2(k x), Gamma1(x) = gamma^2 Gamma2(k x)."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidScale(f"k must be a positive integer, got {k}")
    if gamma <= 0:
        raise InvalidScale(f"gamma must be positive, got {gamma}")
    V1 = m2.V.frequency_scaled(int(k)).times(float(k) ** 2)
    G1 = m2.Gamma.frequency_scaled(int(k)).times(float(gamma) ** 2)
    return PeriodicMedium(V=V1, Gamma=G1)


@dataclass(frozen=True)
class ProblemParams:
    """Nonlinearity exponent p > 1 and spectral parameter lambda."""

    p: float
    lam: float = 0.0

    def __post_init__(self):
        if not self.p > 1.0:
            raise ValueError(f"exponent p must exceed 1, got {self.p}")

    @property
    def eta(self) -> float:
        """1/2 - 1/(p+1): the energy per unit of the quadratic form on the
        constraint set."""
        return 0.5 - 1.0 / (self.p + 1.0)
