"""Fermion mass spectra, generation-mixing coefficients and log constants.

The three linear constraints on the mixing coefficients d_beta,

    sum_b d_b = 0,   sum_b m_b d_b = 0,   sum_b m_b^3 d_b = 1,

single out a unique solution for exactly three generations.  The
mass-logarithm constants s3, sigma0, sigma2 built from that solution feed
the induced field equations; the sigmas depend only on mass ratios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMasses, WrongGenerationCount

# relative gap below which mixing coefficients blow up
DEGENERACY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class MassSpectrum:
    """Strictly increasing positive fermion masses m_1 < ... < m_g."""

    masses: tuple

    def __post_init__(self):
        m = tuple(float(x) for x in self.masses)
        object.__setattr__(self, "masses", m)
        if len(m) < 1:
            raise WrongGenerationCount("need at least one mass")
        if any(x <= 0 for x in m):
            raise DegenerateMasses("masses must be positive")
        for i, (a, b) in enumerate(zip(m, m[1:])):
            if b - a < DEGENERACY_THRESHOLD * m[-1]:
                raise DegenerateMasses(
                    f"masses m_{i + 1} = {a:g} and m_{i + 2} = {b:g} are degenerate "
                    f"(gap below {DEGENERACY_THRESHOLD:.0e} * m_g) or out of order"
                )

    @property
    def g(self) -> int:
        return len(self.masses)

    @property
    def m(self) -> np.ndarray:
        return np.asarray(self.masses)

    # trace moments of the mass matrix (partial traces of Y, Y^2)
    @property
    def sum_m(self) -> float:        # m*Yhat
        return float(np.sum(self.m))

    @property
    def sum_m2(self) -> float:       # m^2 * Yacute Ygrave
        return float(np.sum(self.m**2))

    @property
    def sum_m_sq(self) -> float:     # m^2 * Yhat^2
        return float(np.sum(self.m)) ** 2

    def scaled(self, L: float) -> "MassSpectrum":
        return MassSpectrum(tuple(L * x for x in self.masses))


@dataclass(frozen=True)
class MixingCoefficients:
    d: tuple
    residuals: tuple  # (sum d, sum m d, sum m^3 d - 1)

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.d)


@dataclass(frozen=True)
class LogConstants:
    s3: float
    s0_const: float
    s2_const: float
    sigma0: float
    sigma2: float


def _require_three(spec: MassSpectrum):
    if spec.g != 3:
        raise WrongGenerationCount(f"field-equation operations need g=3, got g={spec.g}")


def closed_form_d(spec: MassSpectrum) -> np.ndarray:
    """d_b = 1 / [(sum m) * prod_{a != b} (m_b - m_a)]."""
    m = spec.m
    out = np.empty(spec.g)
    for b in range(spec.g):
        prod = np.prod([m[b] - m[a] for a in range(spec.g) if a != b])
        out[b] = 1.0 / (np.sum(m) * prod)
    return out


def solve_mixing(spec: MassSpectrum) -> MixingCoefficients:
    """Solve the three mixing constraints for g = 3 and cross-check."""
    _require_three(spec)
    m = spec.m
    A = np.vstack([np.ones(3), m, m**3])
    b = np.array([0.0, 0.0, 1.0])
    d = np.linalg.solve(A, b)
    d += np.linalg.solve(A, b - A @ d)  # one step of iterative refinement

    cf = closed_form_d(spec)
    if not np.allclose(d, cf, rtol=1e-10, atol=0):
        raise DegenerateMasses("closed form and linear solve disagree; masses too close")
    # sum m_b * sum m_b^2 d_b = 1 identically for the solution
    if abs(np.sum(m) * np.sum(m**2 * d) - 1.0) > 1e-9:
        raise DegenerateMasses("moment identity violated; masses too close")

    scale = np.max(np.abs(d))
    res = (
        float(np.sum(d)) / scale,
        float(np.sum(m * d)) / scale,
        float(np.sum(m**3 * d) - 1.0),
    )
    return MixingCoefficients(d=tuple(d), residuals=res)


def log_constants(spec: MassSpectrum, mix: MixingCoefficients | None = None) -> LogConstants:
    """Mass-logarithm constants entering the field equations.

    All values carry the stated 1/(32 pi^3) normalisation; sigma0/sigma2 are
    the 96 pi^3 (s_[p] - s_[3]) combinations, invariant under a joint
    rescaling of the masses.
    """
    _require_three(spec)
    if mix is None:
        mix = solve_mixing(spec)
    m = spec.m
    d = mix.vec
    pref = 1.0 / (32 * np.pi**3)
    s3 = pref * float(np.sum(d * m**3 * np.log(m**2)))
    s0_const = pref / 3.0 * float(np.sum(np.log(m**2)))
    s2_const = pref / spec.sum_m2 * float(np.sum(m**2 * np.log(m**2)))
    sigma0 = 96 * np.pi**3 * (s0_const - s3)
    sigma2 = 96 * np.pi**3 * (s2_const - s3)
    return LogConstants(s3=s3, s0_const=s0_const, s2_const=s2_const,
                        sigma0=sigma0, sigma2=sigma2)
