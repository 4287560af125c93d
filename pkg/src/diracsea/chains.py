"""Spectral analysis of 4x4 closed chains in the continuum-limit surrogate.

The surrogate treats the light-cone vectors xi, xibar and the factors
T^(-1), T^(0) (plus conjugate slots) as independent complex data, which makes
the vacuum eigenvalue formulas, the rank-two spectral projectors, the chiral
phases and the Lagrange-multiplier factor (1 - 4 mu) exactly testable matrix
identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import BadFrameVector, DegenerateZ, PreconditionViolation
from .gamma import CHI_L, CHI_R, dirac_adjoint, minkowski, slash
from .regularization import el_residual  # noqa: F401  (field-equation residual)


@dataclass(frozen=True)
class ChainSurrogate:
    """Inputs of the closed-chain bookkeeping, all treated as independent."""

    xi: tuple
    xibar: tuple
    Tm1: complex
    Tm1bar: complex
    T0: complex
    T0bar: complex
    g: int = 3

    @property
    def xi_vec(self) -> np.ndarray:
        return np.asarray(self.xi, dtype=complex)

    @property
    def xibar_vec(self) -> np.ndarray:
        return np.asarray(self.xibar, dtype=complex)

    @property
    def z(self) -> complex:
        return complex(minkowski(self.xi_vec, self.xi_vec))

    @property
    def zbar(self) -> complex:
        return complex(minkowski(self.xibar_vec, self.xibar_vec))

    def require_split(self):
        z, zbar = self.z, self.zbar
        if abs(z - zbar) < 1e-10 * max(abs(z), abs(zbar), 1e-300):
            raise DegenerateZ(f"z = {z} and zbar = {zbar} too close")

    @classmethod
    def random(cls, rng: np.random.Generator, g: int = 3,
               conjugate_symbols: bool = True) -> "ChainSurrogate":
        """Draw a surrogate obeying the light-cone contraction constraints.

        xi = a - i e1 n and xibar = a + i e2 n with a real, n null: exactly the
        family for which the projector identities and the adjoint swap hold.
        """
        a = rng.normal(size=4)
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        n = np.concatenate([[1.0], direction])   # null vector
        e1, e2 = rng.uniform(0.2, 1.0, size=2)
        # redraw while the time component nearly cancels the spatial one:
        # z - zbar = -2i a.n (e1 + e2) and the projector formulas divide by it
        while abs(a[0] - a[1:] @ direction) < 0.3 * max(1.0, np.linalg.norm(a)):
            a = rng.normal(size=4)
        xi = a - 1j * e1 * n
        xibar = a + 1j * e2 * n
        Tm1 = complex(rng.normal() + 1j * rng.normal())
        T0 = complex(rng.normal() + 1j * rng.normal())
        if conjugate_symbols:
            Tm1bar, T0bar = np.conj(Tm1), np.conj(T0)
        else:
            Tm1bar = complex(rng.normal() + 1j * rng.normal())
            T0bar = complex(rng.normal() + 1j * rng.normal())
        s = cls(tuple(xi), tuple(xibar), Tm1, Tm1bar, T0, T0bar, g)
        s.require_split()
        return s

    def frame_vector(self) -> np.ndarray:
        """An imaginary unit vector v with v.xi = v.xibar = 0, v.v = 1.

        v = i u with real spacelike u Minkowski-orthogonal to the real and
        imaginary parts of xi and xibar (a real null space exists because the
        imaginary shifts share one null direction).
        """
        xi, xb = self.xi_vec, self.xibar_vec
        eta = np.diag([1.0, -1.0, -1.0, -1.0])
        rows = np.vstack([xi.real, xi.imag, xb.real, xb.imag]) @ eta
        _, sv, vt = np.linalg.svd(rows)
        null = [vt[k] for k in range(4)
                if k >= len(sv) or sv[k] < 1e-10 * max(1.0, sv[0])]
        for u in null:
            uu = float(minkowski(u, u))
            if uu < -1e-10:
                return 1j * (u / np.sqrt(-uu))
        raise BadFrameVector("no spacelike direction orthogonal to xi, xibar")


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple
    pairing: tuple
    max_pair_distance: float
    projector_rank_defect: float
    completeness_residual: float


def conjugate_pairing(A: np.ndarray, tol: float = 1e-12) -> SpectrumReport:
    """Match the spectrum of a gamma0-symmetric chain against its conjugates."""
    A = np.asarray(A, dtype=complex)
    sym = np.linalg.norm(A - dirac_adjoint(A))
    if sym > 1e-12 * max(1.0, np.linalg.norm(A)):
        raise PreconditionViolation(f"A != gamma0 A^dag gamma0 (residual {sym:.2e})")
    lam, vecs = np.linalg.eig(A)
    best_perm, best_cost = None, np.inf
    for perm in permutations(range(4)):
        cost = max(abs(lam[k] - np.conj(lam[perm[k]])) for k in range(4))
        if cost < best_cost:
            best_cost, best_perm = cost, perm
    rank_defect = 4 - np.linalg.matrix_rank(vecs, tol=1e-10 * np.linalg.norm(vecs))
    if rank_defect == 0:
        recon = vecs @ np.diag(lam) @ np.linalg.inv(vecs)
        completeness = float(np.linalg.norm(recon - A) / max(1.0, np.linalg.norm(A)))
    else:
        completeness = float("inf")
    return SpectrumReport(tuple(lam), best_perm, float(best_cost),
                          float(rank_defect), completeness)


def same_spectrum(B: np.ndarray, C: np.ndarray) -> float:
    """Max relative difference of char-poly coefficients of BC and CB."""
    pb = np.poly(np.asarray(B) @ np.asarray(C))
    pc = np.poly(np.asarray(C) @ np.asarray(B))
    scale = np.maximum(np.abs(pb) + np.abs(pc), 1.0)
    return float(np.max(np.abs(pb - pc) / scale))


def closed_chain(s: ChainSurrogate) -> np.ndarray:
    """A0 = (g^2/4) (xislash Tm1)(xibarslash Tm1bar)."""
    return (s.g**2 / 4) * s.Tm1 * s.Tm1bar * (slash(s.xi_vec) @ slash(s.xibar_vec))


def vacuum_spectrum(s: ChainSurrogate):
    """Eigenvalues lambda_+/- and rank-two projectors F_+/- of the vacuum chain.

    lambda_+ = g^2 T0 conj-slot(Tm1), lambda_- = g^2 Tm1 conj-slot(T0);
    F_+/- = (1 +/- [xislash, xibarslash]/(z - zbar))/2.  All projector
    identities are verified before returning.
    """
    s.require_split()
    lam_p = s.g**2 * s.T0 * s.Tm1bar
    lam_m = s.g**2 * s.Tm1 * s.T0bar
    xs, xbs = slash(s.xi_vec), slash(s.xibar_vec)
    comm = xs @ xbs - xbs @ xs
    F_p = 0.5 * (np.eye(4) + comm / (s.z - s.zbar))
    F_m = 0.5 * (np.eye(4) - comm / (s.z - s.zbar))
    checks = {
        "idempotent+": np.linalg.norm(F_p @ F_p - F_p),
        "idempotent-": np.linalg.norm(F_m @ F_m - F_m),
        "orthogonal": np.linalg.norm(F_p @ F_m),
        "complete": np.linalg.norm(F_p + F_m - np.eye(4)),
        "rank+": abs(np.trace(F_p) - 2),
        "rank-": abs(np.trace(F_m) - 2),
    }
    worst = max(checks.values())
    if worst > 1e-9:
        raise DegenerateZ(f"projector identities fail: {checks}")
    return lam_p, lam_m, F_p, F_m


def projector_adjoint_residual(s: ChainSurrogate) -> float:
    """|| F_+^* - F_- || for the surrogate (adjoint swap)."""
    _, _, F_p, F_m = vacuum_spectrum(s)
    return float(np.linalg.norm(dirac_adjoint(F_p) - F_m))


def chiral_spectrum(s: ChainSurrogate, lam_L: float, lam_R: float):
    """Four labeled eigenvalues with the chiral phases nu_L = conj(nu_R).

    Returns dict {(c, sign): eigenvalue}; asserts the four moduli agree.
    """
    lam_p, lam_m, _, _ = vacuum_spectrum(s)
    nu_L = np.exp(-1j * (lam_L - lam_R))
    nu_R = np.conj(nu_L)
    out = {("L", +1): nu_L * lam_p, ("L", -1): nu_L * lam_m,
           ("R", +1): nu_R * lam_p, ("R", -1): nu_R * lam_m}
    mods = [abs(v) for v in out.values()]
    if max(mods) - min(mods) > 1e-12 * max(mods):
        raise DegenerateZ("chiral eigenvalue moduli differ; T-symbols not conjugate")
    return out


def q_factor(s: ChainSurrogate, mu: float) -> complex:
    """Scalar prefactor of the EL operator: g^3 (1 - 4 mu) T0 Tm1 conj-slot(Tm1)."""
    return (1.0 - 4.0 * mu) * s.g**3 * s.T0 * s.Tm1 * s.Tm1bar


_FRAME_TOL = 1e-10


def null_frame_components(B: np.ndarray, s: ChainSurrogate, v) -> dict:
    """The sixteen double-null-frame matrix elements of a 4x4 operator B.

    v must satisfy v.xi = v.xibar = 0, v.v = 1 and conj(v) = -v.  The eight
    (L, *) entries follow the trace formulas with F0_+; the (R, *) entries are
    their images under chi_L -> chi_R.
    """
    v = np.asarray(v, dtype=complex)
    if (abs(minkowski(v, s.xi_vec)) > _FRAME_TOL
            or abs(minkowski(v, s.xibar_vec)) > _FRAME_TOL
            or abs(minkowski(v, v) - 1.0) > _FRAME_TOL
            or np.max(np.abs(np.conj(v) + v)) > _FRAME_TOL):
        raise BadFrameVector("v must be imaginary, unit, and orthogonal to xi, xibar")
    _, _, F_p, _ = vacuum_spectrum(s)
    xs = slash(s.xi_vec)
    vs = slash(v)
    z = s.z
    out = {}
    for c, chi in (("L", CHI_L), ("R", CHI_R)):
        cc = "L" if c == "L" else "R"
        other = "R" if c == "L" else "L"
        out[(cc, cc, "+", "+")] = np.trace(F_p @ chi @ B)
        out[(cc, other, "+", "+")] = np.trace(F_p @ vs @ chi @ B)
        out[(cc, cc, "+", "-")] = np.trace(xs @ F_p @ vs @ chi @ B)
        out[(cc, other, "+", "-")] = np.trace(xs @ F_p @ chi @ B)
        out[(cc, cc, "-", "+")] = np.trace(F_p @ vs @ xs @ chi @ B) / z
        out[(cc, other, "-", "+")] = np.trace(F_p @ xs @ chi @ B) / z
        out[(cc, cc, "-", "-")] = np.trace(xs @ F_p @ xs @ chi @ B) / z
        out[(cc, other, "-", "-")] = np.trace(xs @ F_p @ vs @ xs @ chi @ B) / z
    return {k: complex(val) for k, val in out.items()}


def selftest(trials: int = 1000, seed: int = 0) -> dict:
    """Random-trial verification of the chain identities; worst residual per property."""
    rng = np.random.default_rng(seed)
    worst = {"pairing": 0.0, "same_spectrum": 0.0, "projectors": 0.0,
             "adjoint_swap": 0.0, "chiral_moduli": 0.0, "q_factor": 0.0}
    for _ in range(trials):
        P = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        A = P @ dirac_adjoint(P)
        rep = conjugate_pairing(A)
        worst["pairing"] = max(worst["pairing"], rep.max_pair_distance
                               / max(1.0, float(np.max(np.abs(rep.eigenvalues)))))
        B = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        C = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        worst["same_spectrum"] = max(worst["same_spectrum"], same_spectrum(B, C))
    for _ in range(max(1, trials // 10)):
        s = ChainSurrogate.random(rng)
        lam_p, lam_m, F_p, F_m = vacuum_spectrum(s)
        resid = max(np.linalg.norm(F_p @ F_p - F_p), np.linalg.norm(F_m @ F_m - F_m),
                    np.linalg.norm(F_p @ F_m), np.linalg.norm(F_p + F_m - np.eye(4)),
                    abs(np.trace(F_p) - 2), abs(np.trace(F_m) - 2))
        worst["projectors"] = max(worst["projectors"], float(resid))
        worst["adjoint_swap"] = max(worst["adjoint_swap"], projector_adjoint_residual(s))
        vals = chiral_spectrum(s, rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        mods = [abs(v) for v in vals.values()]
        worst["chiral_moduli"] = max(worst["chiral_moduli"],
                                     (max(mods) - min(mods)) / max(mods))
        worst["q_factor"] = max(worst["q_factor"], abs(q_factor(s, 0.25)))
    return worst
