"""Concrete regularization models and weak evaluation on the light cone.

A model supplies closed-form values of the regularized factors T^(0)_[p] and
T^(-1)_[p] near the upper light cone t ~ r.  Weak evaluation integrates a
simple fraction across the cone, normalizes by eps^(L-1) (i r)^L and fits the
leading coefficient; the ratios of the four basic fractions give the
regularization constants of the induced field equations, and together with
the mass-log constants they fix the coupling constant and the boson mass.

Normalisation note: both models are pinned so that eps -> 0 recovers the
unregularized distribution -1/(16 pi^3 r (t - r - i0)); for the momentum
cutoff this requires the prefactor 1/(8 pi^3), not the sometimes-quoted
1/(16 pi^3), and it is what reproduces the (-3/4, -3, +3) coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (FitFailure, NonPositiveC0, QuadratureFailure,
                     UnsupportedFactor, WrongGenerationCount)
from .fraction_algebra import Factor, FractionSum, SimpleFraction, encode_basic_fractions
from .spectra import LogConstants, MassSpectrum, log_constants, solve_mixing


class RegKind(Enum):
    EXPONENTIAL = "exp"
    HARD_CUTOFF = "cutoff"


# default weak-evaluation window, in units of eps, and the epsilon grid
WINDOW_SCALE = 64 * np.pi
EPS_GRID = tuple(np.geomspace(1e-6, 1e-4, 8))

_REMOVABLE = 1e-6   # |t-r| < _REMOVABLE*eps switches the cutoff to its series
PANEL_BUDGET = 20000


@dataclass(frozen=True)
class RegularizationModel:
    kind: RegKind

    def t0(self, s, r, eps):
        """T^(0)_[p](t, r, eps) with s = t - r; vectorized over s."""
        s = np.asarray(s, dtype=float)
        if self.kind is RegKind.EXPONENTIAL:
            return -1.0 / (16 * np.pi**3 * r) / (s - 1j * eps)
        u = s / eps
        small = np.abs(u) < _REMOVABLE
        us = np.where(small, 1.0, u)
        val = np.where(small,
                       (1j / eps) * (1 - 1j * u / 2 - u**2 / 6 + 1j * u**3 / 24),
                       (1 - np.exp(-1j * us)) / (us * eps))
        return -1.0 / (16 * np.pi**3 * r) * val

    def tm1(self, s, r, eps):
        """T^(-1)_[p] = -(2/r) d/dt T^(0)_[p]; vectorized over s."""
        s = np.asarray(s, dtype=float)
        if self.kind is RegKind.EXPONENTIAL:
            return -1.0 / (8 * np.pi**3 * r**2) / (s - 1j * eps) ** 2
        u = s / eps
        small = np.abs(u) < _REMOVABLE
        us = np.where(small, 1.0, u)
        dpsi = np.where(small,
                        (1j / eps**2) * (-1j / 2 - u / 3 + 1j * u**2 / 8 + u**3 / 30),
                        ((1j / eps) * np.exp(-1j * us) * us * eps
                         - (1 - np.exp(-1j * us))) / (us * eps) ** 2)
        return (2.0 / r) / (16 * np.pi**3 * r) * dpsi

    def eval_factor(self, f: Factor, t, r, eps):
        """Closed-form value of one factor; conjugated factors conjugate it."""
        if f.curly:
            raise UnsupportedFactor("curly-brace factors are opaque symbols")
        if f.n not in (-1, 0):
            raise UnsupportedFactor(f"no closed form for n={f.n}")
        if r <= 0 or eps <= 0:
            raise ValueError("need r > 0 and eps > 0")
        s = np.asarray(t, dtype=float) - r
        val = self.t0(s, r, eps) if f.n == 0 else self.tm1(s, r, eps)
        return np.conj(val) if f.conjugated else val

    def eval_fraction(self, frac: SimpleFraction, s, r, eps):
        """Value of a simple fraction at s = t - r (vectorized)."""
        t0 = self.t0(s, r, eps)
        tm1 = self.tm1(s, r, eps)
        lut = {(0, False): t0, (0, True): np.conj(t0),
               (-1, False): tm1, (-1, True): np.conj(tm1)}

        def pick(f: Factor):
            if f.curly or (f.n, f.conjugated) not in lut:
                raise UnsupportedFactor(f"cannot evaluate {f.render()}")
            return lut[(f.n, f.conjugated)]

        val = np.full_like(t0, complex(0))
        val[...] = complex(sum(float(q) * np.pi**k
                               for k, q in frac.coefficient.terms.items()))
        for f in frac.numerator:
            val = val * pick(f)
        for f in frac.denominator:
            val = val / pick(f)
        return val

    def eval_sum(self, fs, s, r, eps):
        fs = fs if isinstance(fs, FractionSum) else FractionSum([fs])
        s = np.asarray(s, dtype=float)
        total = np.zeros(s.shape, dtype=complex)
        for t in fs:
            total = total + self.eval_fraction(t, s, r, eps)
        return total


EXPONENTIAL = RegularizationModel(RegKind.EXPONENTIAL)
HARD_CUTOFF = RegularizationModel(RegKind.HARD_CUTOFF)


def model_from_name(name: str) -> RegularizationModel:
    name = name.lower()
    if name in ("exp", "exponential"):
        return EXPONENTIAL
    if name in ("cutoff", "cut", "hard", "hardcutoff"):
        return HARD_CUTOFF
    raise ValueError(f"unknown regularization {name!r}")


@dataclass(frozen=True)
class WeakValue:
    pole_coefficient: complex
    log_coefficient: complex
    fit_residual: float


# 15-point Gauss-Legendre nodes/weights on [-1, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


def _panel_integrate(f, a, b, n_panels):
    """Composite fixed-order Gauss-Legendre over uniform panels, fully vectorized."""
    if n_panels > PANEL_BUDGET:
        raise QuadratureFailure(f"panel budget exceeded: {n_panels} > {PANEL_BUDGET}")
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    vals = f(pts).reshape(n_panels, -1)
    return np.sum(vals @ _GL_W * half)

def _adaptive_window_integral(f, w, eps):
    """Integral of f over s in [-w, w], refined until two panelings agree."""
    # resolve the eps-scale peak and the eps-period oscillation
    n = max(16, int(np.ceil(2 * w / (np.pi * eps))))
    coarse = _panel_integrate(f, -w, w, n)
    for _ in range(6):
        n2 = 2 * n
        fine = _panel_integrate(f, -w, w, n2)
        if abs(fine - coarse) <= 1e-12 * max(1.0, abs(fine)) + 1e-13 * abs(fine):
            return fine
        coarse, n = fine, n2
    return coarse


def weak_eval(model: RegularizationModel, frac, r, eps_grid=EPS_GRID,
              window_scale: float = WINDOW_SCALE, tail_refine: bool = False) -> WeakValue:
    """Weak evaluation of a homogeneous-degree fraction across the light cone.

    For each eps the fraction is integrated over t in [r - W eps, r + W eps]
    (W = window_scale; the wide window captures the full transverse profile,
    which matters for the oscillatory cutoff model), normalized by
    eps^(L-1) (i r)^L and fitted against a + b log(eps r).  With tail_refine
    the window tail is removed by Richardson extrapolation in W.
    """
    fs = frac if isinstance(frac, FractionSum) else FractionSum([frac])
    degs = fs.degrees()
    if len(degs) != 1:
        raise FitFailure(f"fraction must have homogeneous degree, got {degs}")
    L = degs.pop()
    eps_grid = np.asarray(list(eps_grid), dtype=float)
    if len(eps_grid) < 6:
        raise ValueError("eps grid needs at least 6 points")
    widest = (2 if tail_refine else 1) * window_scale
    if np.max(eps_grid) * widest > 0.5 * r:
        raise ValueError("eps grid not small enough for the window to fit under r")

    vals = np.empty(len(eps_grid), dtype=complex)
    for i, eps in enumerate(eps_grid):
        def f(s, eps=eps):
            return model.eval_sum(fs, s, r, eps)
        w = window_scale * eps
        I = _adaptive_window_integral(f, w, eps)
        if tail_refine:
            I2 = _adaptive_window_integral(f, 2 * w, eps)
            I = 2 * I2 - I
        vals[i] = I * eps ** (L - 1) * (1j * r) ** L

    # least-squares fit  vals ~ a + b log(eps r)
    X = np.column_stack([np.ones_like(eps_grid), np.log(eps_grid * r)])
    coef_re, res_re = np.linalg.lstsq(X, vals.real, rcond=None)[:2]
    coef_im, res_im = np.linalg.lstsq(X, vals.imag, rcond=None)[:2]
    a = complex(coef_re[0], coef_im[0])
    b = complex(coef_re[1], coef_im[1])
    resid = float(np.sqrt((np.sum(res_re) if len(res_re) else 0.0)
                          + (np.sum(res_im) if len(res_im) else 0.0)))
    rel = resid / max(1e-300, abs(a))
    if rel > 1e-4:
        raise FitFailure(f"weak-evaluation fit residual {rel:.2e} too large")
    return WeakValue(pole_coefficient=a, log_coefficient=b, fit_residual=rel)


def basic_ratios(model: RegularizationModel, r: float = 1.0, eps_grid=EPS_GRID):
    """96 pi^3 (c0/c1, c2/c1, c3/c1) from weak evaluation of the basic fractions."""
    c = encode_basic_fractions()
    weak = [weak_eval(model, ci, r, eps_grid, tail_refine=True) for ci in c]
    c1 = weak[1].pole_coefficient
    out = []
    for i in (0, 2, 3):
        ratio = 96 * np.pi**3 * weak[i].pole_coefficient / c1
        if abs(ratio.imag) > 1e-6 * max(1.0, abs(ratio.real)):
            raise FitFailure(f"basic ratio c{i}/c1 has imaginary residue {ratio.imag:.2e}")
        out.append(float(ratio.real))
    return tuple(out)


# regularization constants are mass independent; cache per model
_RATIO_CACHE: dict = {}


def cached_ratios(model: RegularizationModel):
    key = model.kind
    if key not in _RATIO_CACHE:
        _RATIO_CACHE[key] = basic_ratios(model)
    return _RATIO_CACHE[key]


@dataclass(frozen=True)
class FieldConstants:
    r0: float
    r2: float
    r3: float
    sigma0: float
    sigma2: float
    C0: float
    mass_term: float
    e2: float
    M2: float

    @property
    def e(self) -> float:
        return float(np.sqrt(self.e2))

    @property
    def M(self) -> float:
        return float(np.sqrt(self.M2))


def assemble_field_constants(spec: MassSpectrum, r0, r2, r3,
                             logs: LogConstants | None = None) -> FieldConstants:
    """Combine regularization ratios with the mass-log constants.

    C0 = r0 - sigma0;  mass_term = r2 (sum m)^2 + r3 sum m^2 - 2 sigma2 sum m^2,
    so the field equation reads C0 j_a - mass_term A_a = 12 pi^2 J_a and
    M^2 = mass_term / C0, e^2 = 12 pi^2 / C0.  Convolution corrections are
    deliberately excluded here.
    """
    if spec.g != 3:
        raise WrongGenerationCount("field constants need g = 3")
    if logs is None:
        logs = log_constants(spec, solve_mixing(spec))
    C0 = r0 - logs.sigma0
    mass_term = r2 * spec.sum_m_sq + r3 * spec.sum_m2 - 2 * logs.sigma2 * spec.sum_m2
    if C0 <= 0:
        raise NonPositiveC0(f"C0 = {C0:.6g} <= 0: coupling undefined")
    return FieldConstants(r0=r0, r2=r2, r3=r3, sigma0=logs.sigma0, sigma2=logs.sigma2,
                          C0=C0, mass_term=mass_term,
                          e2=12 * np.pi**2 / C0, M2=mass_term / C0)


def field_constants(spec: MassSpectrum, model: RegularizationModel) -> FieldConstants:
    r0, r2, r3 = cached_ratios(model)
    return assemble_field_constants(spec, r0, r2, r3)


def el_residual(fc: FieldConstants, j_a, A_a, J_a) -> np.ndarray:
    """Componentwise residual of  C0 j_a - mass_term A_a - 12 pi^2 J_a."""
    j_a = np.asarray(j_a, dtype=float)
    A_a = np.asarray(A_a, dtype=float)
    J_a = np.asarray(J_a, dtype=float)
    return fc.C0 * j_a - fc.mass_term * A_a - 12 * np.pi**2 * J_a


@dataclass(frozen=True)
class ScanRow:
    ratio2: float
    ratio3: float
    e: float | None
    M_over_m1: float | None


def scan(model: RegularizationModel, ratio2_grid, ratio3_grid):
    """Coupling and boson mass over a grid of mass ratios (m1 = 1).

    Rows violating the mass ordering or the degeneracy threshold are skipped;
    non-positive C0 produces a sentinel row with blank entries.  Returns the
    row list and the count of failed rows.
    """
    r0, r2, r3 = cached_ratios(model)
    rows = []
    failures = 0
    for q2 in ratio2_grid:
        for q3 in ratio3_grid:
            if not (1.0 < q2 < q3):
                continue
            try:
                spec = MassSpectrum((1.0, float(q2), float(q3)))
                fc = assemble_field_constants(spec, r0, r2, r3)
                rows.append(ScanRow(float(q2), float(q3), fc.e, fc.M))
            except NonPositiveC0:
                rows.append(ScanRow(float(q2), float(q3), None, None))
                failures += 1
    return rows, failures
