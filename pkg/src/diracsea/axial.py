"""Constructive local axial transformation on g generations.

Given a vector u, build the 4g x 4g transformation U(x) whose generation
partial traces satisfy the three closed-chain conditions: Uslash(xi)U^-1
stays proportional to slash(xi), the Y partial trace stays proportional to
the identity, and the Y^3 partial trace acquires exactly the axial term
fixed by u.  A timelike u leads to a positive definite generation matrix V,
a spacelike u to a unitary one; u = S v / 4 with S = sum_b m_b^3 d_b, so the
spacelike branch is feasible iff <u,u> >= -(S_max/4)^2.

Convention: with gamma5 Hermitian the realized axial contribution to the
Y^3 trace is the real-coefficient matrix 2 S gamma5 slash(v) = 8 gamma5
slash(u); verify_conditions checks against that normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, product

import numpy as np

from .errors import Infeasible, NumericalFailure, WrongGenerationCount
from .gamma import GAMMA5, minkowski, slash
from .spectra import MassSpectrum

_NULL_TOL = 1e-12


# ---------------------------------------------------------------------------
# feasibility functional
# ---------------------------------------------------------------------------

def smax(spec: MassSpectrum) -> float:
    """Closed-form maximum of sum m^3 d over the sign-constrained simplex."""
    if spec.g < 3:
        raise WrongGenerationCount("need at least three generations")
    m = spec.m
    best = max((m[-1] - m[a]) * (m[a] - m[0]) * (m[0] + m[a] + m[-1])
               for a in range(1, spec.g - 1))
    return float(spec.g / 4.0 * best)


def smax_argmax(spec: MassSpectrum) -> int:
    m = spec.m
    vals = [(m[-1] - m[a]) * (m[a] - m[0]) * (m[0] + m[a] + m[-1])
            for a in range(1, spec.g - 1)]
    return 1 + int(np.argmax(vals))


def smax_oracle(spec: MassSpectrum) -> float:
    """Brute-force LP vertex enumeration of max sum m^3 d.

    Constraints: sum d = 0, sum m d = 0, sum |d| = g/2.  Vertices are
    supported on at most three indices; enumerate all support triples and
    sign patterns, solve each 3x3 system, keep sign-consistent solutions.
    """
    if spec.g < 3:
        raise WrongGenerationCount("need at least three generations")
    m = spec.m
    g = spec.g
    best = 0.0
    for idx in combinations(range(g), 3):
        mi = m[list(idx)]
        for signs in product((1.0, -1.0), repeat=3):
            A = np.vstack([np.ones(3), mi, np.array(signs)])
            try:
                d3 = np.linalg.solve(A, np.array([0.0, 0.0, g / 2.0]))
            except np.linalg.LinAlgError:
                continue
            if np.any(d3 * np.array(signs) < -1e-12):
                continue
            best = max(best, float(np.dot(mi**3, d3)))
    return best


def feasibility_bound(spec: MassSpectrum) -> float:
    """Lower bound on <u,u>: spacelike u must satisfy <u,u> >= -(S_max/4)^2."""
    return -((smax(spec) / 4.0) ** 2)


def _three_support_d(spec: MassSpectrum, target: float) -> np.ndarray:
    """d supported on {1, argmax, g} with sum d = sum m d = 0, sum m^3 d = target."""
    m = spec.m
    idx = [0, smax_argmax(spec), spec.g - 1]
    mi = m[idx]
    A = np.vstack([np.ones(3), mi, mi**3])
    d3 = np.linalg.solve(A, np.array([0.0, 0.0, target]))
    d = np.zeros(spec.g)
    d[idx] = d3
    return d


# ---------------------------------------------------------------------------
# generation matrix constructions
# ---------------------------------------------------------------------------

def _rank2_hermitian(w, g):
    """(w l^dag + l w^dag)/g for l = (1,..,1); maps l to w + l <w^dag l>/g."""
    ell = np.ones(g, dtype=complex)
    return (np.outer(w, ell.conj()) + np.outer(ell, w.conj())) / g


def _expm_hermitian(H):
    w, P = np.linalg.eigh(H)
    return (P * np.exp(w)) @ P.conj().T


def _positive_definite_V(masses, S):
    """Hermitian positive definite V with V^-1 l = m, V l = n (timelike case).

    V = exp(gfrak) over a three-parameter Hermitian family; positive
    definiteness is automatic, <m|n> = g and sum tau = g, sum d = 0 hold
    identically, and a 3x3 Newton drives the remaining exact conditions
    sum m_b d_b = 0, sum m_b^3 d_b = S and ||n|| = ||m||.  The conditions are
    formulated in mass ratios mu = m/m_g so the Newton is scale free, and a
    homotopy in the target handles large |S|.
    """
    m = np.asarray(masses, dtype=float)
    g = len(m)
    mu = m / m[-1]
    target_full = S / m[-1] ** 3
    ratio3 = np.vstack([np.ones(g), mu, mu**3])
    ell = np.ones(g, dtype=complex)

    # unit directions with zero component sums: the target d shape and an
    # orthogonal partner (unnormalized directions would drive exp(gfrak)
    # through condition numbers ~ exp(target * |y|^2) for close masses)
    y1 = np.zeros(g)
    idx = [0, g // 2 if g > 3 else 1, g - 1]
    y1[idx] = np.linalg.solve(ratio3[:, idx], [0.0, 0.0, 1.0])
    moment3 = 1.0 / np.linalg.norm(y1)   # sum mu^3 y1hat after normalizing
    y1 = y1 / np.linalg.norm(y1)
    y2 = np.zeros(g)
    y2[idx] = np.linalg.solve(ratio3[:, idx], [0.0, 1.0, 0.0])
    y2 = y2 - (y2 @ y1) * y1
    y2 = y2 / np.linalg.norm(y2)

    H1 = _rank2_hermitian(-1j * y1, g)
    H2 = _rank2_hermitian(-1j * y2, g)
    H3 = _rank2_hermitian(ell, g)  # common rescaling direction

    def assemble(p, target):
        a, b, c = p
        V = _expm_hermitian(a * H1 + b * H2 + c * H3)
        nb = V @ ell
        mb = np.linalg.solve(V, ell)
        prod = np.conj(nb) * mb
        tau = prod.real
        d = prod.imag / 2.0
        F = np.array([float(np.dot(mu, d)),
                      float(np.dot(mu**3, d)) - target,
                      float(np.vdot(nb, nb).real - np.vdot(mb, mb).real)])
        return V, mb, nb, tau, d, F

    def noise_scales(state):
        # rounding floors of the three conditions (d and the vector norms
        # carry the conditioning of exp(gfrak))
        _, mb, nb, _, d, _ = state
        dn = max(1.0, float(np.linalg.norm(d)))
        vn = max(1.0, float(np.vdot(nb, nb).real + np.vdot(mb, mb).real))
        return np.array([dn, dn, vn])

    def converged(state, factor=1.0):
        return np.all(np.abs(state[5]) < factor * 1e-13 * noise_scales(state))

    def newton(p, target):
        state = assemble(p, target)
        for _ in range(80):
            if converged(state):
                return p, state
            F = state[5]
            J = np.empty((3, 3))
            h = 1e-7 * max(1.0, np.max(np.abs(p)))
            for k in range(3):
                dp = np.zeros(3)
                dp[k] = h
                J[:, k] = (assemble(p + dp, target)[5] - F) / h
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                return None
            t = 1.0
            while t >= 1e-6:
                cand = assemble(p + t * step, target)
                if np.linalg.norm(cand[5]) < np.linalg.norm(F):
                    break
                t *= 0.5
            else:
                # stalled at the rounding floor: accept if within 100x of it
                if converged(state, factor=100.0):
                    return p, state
                return None  # genuine stall; caller retries via homotopy
            p = p + t * step
            state = cand
        return None

    def alpha_guess(target):
        # exact pure-y1 solution: d = (sqrt(g)/2) sinh(2 a/sqrt(g)) y1hat
        return 0.5 * np.sqrt(g) * np.arcsinh(2.0 * target / (np.sqrt(g) * moment3))

    # homotopy in the target, doubling the step count until the solve goes through
    for n_steps in (1, 4, 16, 64):
        p = None
        ok = True
        for k in range(1, n_steps + 1):
            target = target_full * k / n_steps
            if p is None:
                p = np.array([alpha_guess(target), 0.0, 0.0])
            result = newton(p, target)
            if result is None:
                ok = False
                break
            p, state = result
        if ok:
            V, mb, nb, tau, d, _ = state
            return V, mb, nb, tau, d
    raise NumericalFailure(
        "timelike generation-matrix solve did not converge; near-degenerate "
        "masses amplify the mixing coefficients beyond double precision for "
        "this axial vector")


def _unitary_map(a, b):
    """Unitary with U a = b (same norms), identity off span{a, b}."""
    g = len(a)
    na = np.linalg.norm(a)
    if na < 1e-300:
        return np.eye(g, dtype=complex)
    e1 = a / na
    c1 = np.vdot(e1, b)
    perp = b - c1 * e1
    npn = np.linalg.norm(perp)
    if npn < 1e-14 * na:
        U = np.eye(g, dtype=complex)
        return U + (c1 / na - 1.0) * np.outer(e1, e1.conj())
    e2 = perp / npn
    al, be = c1 / na, npn / na
    B2 = np.array([[al, -np.conj(be)], [be, np.conj(al)]])
    P = np.stack([e1, e2], axis=1)
    return np.eye(g, dtype=complex) + P @ (B2 - np.eye(2)) @ P.conj().T


def _close_phases(rho):
    """Angles phi with sum rho_k e^{i phi_k} = 0, via the ordered sign walk."""
    n = len(rho)
    order = np.argsort(rho)
    r = rho[order]
    big, second = r[-1], r[-2]
    lo, hi = big - second, big + second

    def walk(signs):
        return float(np.dot(signs, r[:-2]))

    signs = np.ones(n - 2)
    z = 0.0
    for k in range(n - 2):
        if z + r[k] <= hi:
            signs[k] = 1.0
        else:
            signs[k] = -1.0
        z += signs[k] * r[k]
    if not (lo - 1e-12 <= z <= hi + 1e-12) or z < 0:
        # fall back to exhaustive sign search (n <= ~12 in practice)
        for combo in product((1.0, -1.0), repeat=n - 2):
            z = walk(np.array(combo))
            if 0 <= z and lo - 1e-12 <= z <= hi + 1e-12:
                signs = np.array(combo)
                break
        else:
            raise NumericalFailure("polygon closure failed: moduli too lopsided")
    z = walk(signs)
    # close the polygon with the two largest moduli: big e^{i t2} + second e^{i t1} = -z
    if z < 1e-13:
        # z = 0 is only reachable with big = second (the band contains 0)
        t2, t1 = np.pi / 2, -np.pi / 2
    else:
        cosA = np.clip((z**2 + big**2 - second**2) / (2 * z * big), -1.0, 1.0)
        t2 = np.pi - np.arccos(cosA)
        w = -z - big * np.exp(1j * t2)
        t1 = np.angle(w)
    phases = np.zeros(n)
    phases[order[:-2]] = np.where(signs > 0, 0.0, np.pi)
    phases[order[-2]] = t1
    phases[order[-1]] = t2
    total = np.abs(np.sum(rho * np.exp(1j * phases)))
    if total > 1e-10 * max(1.0, np.sum(rho)):
        raise NumericalFailure(f"phase closure residual {total:.2e}")
    return phases


def _unitary_V(spec: MassSpectrum, target: float):
    """Unitary V with V^-1 l = m, V l = n realizing sum m^3 d = target."""
    g = spec.g
    cap = smax(spec)
    dstar = _lp_vertex_d(spec)
    d = dstar * (target / cap)
    tau = 2 * np.abs(d) + (g - 2 * np.sum(np.abs(d))) / g
    nmod = np.sqrt(tau + 2 * d)
    mmod = np.sqrt(tau - 2 * d)
    # \sum conj(m_b) - \sum n_b = 0 as a vanishing sum of 2g complex numbers
    phases = _close_phases(np.concatenate([mmod, nmod]))
    mb = mmod * np.exp(-1j * phases[:g])
    nb = nmod * np.exp(1j * (phases[g:] + np.pi))
    # make <m|n> real by a counter-rotation
    chi = 0.5 * np.angle(np.vdot(mb, nb))
    mb = mb * np.exp(1j * chi)
    nb = nb * np.exp(-1j * chi)
    ell = np.ones(g, dtype=complex)
    V1 = _unitary_map(mb, ell)
    ltil = V1 @ ell
    # V2 fixes l and maps V1 l to n; both perp components live in l^perp
    P_l = np.outer(ell, ell.conj()) / g
    V2 = _unitary_map(ltil - P_l @ ltil, nb - P_l @ nb)
    V = V2 @ V1
    return V, mb, nb, tau, d


def _lp_vertex_d(spec: MassSpectrum) -> np.ndarray:
    """The sign-constrained vertex attaining S_max (support {1, argmax, g})."""
    m = spec.m
    g = spec.g
    a = smax_argmax(spec)
    d = np.zeros(g)
    d1 = (g / 4.0) * (m[-1] - m[a]) / (m[-1] - m[0])
    dg = (g / 4.0) * (m[a] - m[0]) / (m[-1] - m[0])
    d[0], d[a], d[-1] = d1, -(d1 + dg), dg
    return d


# ---------------------------------------------------------------------------
# assembling U and verifying the trace conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxialRequest:
    """A spectrum and target axial vector, validated against the bound."""

    spec: MassSpectrum
    u: tuple

    def __post_init__(self):
        uu = float(minkowski(np.asarray(self.u, float), np.asarray(self.u, float)))
        if uu < feasibility_bound(self.spec) * (1 + 1e-12):
            raise Infeasible(f"<u,u> = {uu:.6g} below the feasibility bound")


@dataclass(frozen=True)
class AxialSolution:
    case: str              # "null", "timelike", "spacelike", "identity"
    u: tuple
    v: tuple
    tau: tuple
    d: tuple
    mvec: tuple | None
    nvec: tuple | None
    V: np.ndarray | None
    U: np.ndarray
    Uinv: np.ndarray
    residuals: dict

    @property
    def worst_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else float("nan")


def _kron_gen_spin(gen, spin):
    return np.kron(gen, spin)


def construct(spec: MassSpectrum, u) -> AxialSolution:
    """Build the local axial transformation realizing the axial vector u."""
    if spec.g < 3:
        raise WrongGenerationCount("need at least three generations")
    u = np.asarray(u, dtype=float)
    g = spec.g
    m = spec.m
    uu = float(minkowski(u, u))
    scale = float(np.max(np.abs(u))) if np.max(np.abs(u)) > 0 else 0.0

    if scale == 0.0:
        U = np.eye(4 * g, dtype=complex)
        sol = AxialSolution("identity", tuple(u), (1.0, 0, 0, 0), tuple(np.ones(g)),
                            tuple(np.zeros(g)), None, None, None, U, U, {})
    elif abs(uu) < _NULL_TOL * scale**2:
        # null case: U = 1 - i gfrak (x) gamma5 vslash is exact
        v = u
        S = 4.0
        d = _three_support_d(spec, S)
        w = -1j * d
        ell = np.ones(g, dtype=complex)
        gfrak = (np.outer(w, ell.conj()) + np.outer(ell, w.conj())) / g
        K = GAMMA5 @ slash(v)
        U = np.eye(4 * g, dtype=complex) - 1j * _kron_gen_spin(gfrak, K)
        Uinv = np.eye(4 * g, dtype=complex) + 1j * _kron_gen_spin(gfrak, K)
        sol = AxialSolution("null", tuple(u), tuple(v), tuple(np.ones(g)), tuple(d),
                            None, None, None, U, Uinv, {})
    elif uu > 0:
        v = u / np.sqrt(uu)
        S = 4.0 * np.sqrt(uu)
        V, mb, nb, tau, d = _positive_definite_V(m, S)
        Vinv = np.linalg.inv(V)
        cosh_g = 0.5 * (V + Vinv)
        sinh_g = 0.5 * (V - Vinv)
        K = 1j * (GAMMA5 @ slash(v))
        U = _kron_gen_spin(cosh_g, np.eye(4)) - _kron_gen_spin(sinh_g, K)
        Uinv = _kron_gen_spin(cosh_g, np.eye(4)) + _kron_gen_spin(sinh_g, K)
        sol = AxialSolution("timelike", tuple(u), tuple(v), tuple(tau), tuple(d),
                            tuple(mb), tuple(nb), V, U, Uinv, {})
    else:
        bound = feasibility_bound(spec)
        if uu < bound * (1 + 1e-12):
            raise Infeasible(f"<u,u> = {uu:.6g} below the bound {bound:.6g}")
        v = u / np.sqrt(-uu)
        S = 4.0 * np.sqrt(-uu)
        V, mb, nb, tau, d = _unitary_V(spec, S)
        Vdag = V.conj().T
        cos_g = 0.5 * (V + Vdag)
        sin_g = (V - Vdag) / 2j
        K = 1j * (GAMMA5 @ slash(v))
        U = _kron_gen_spin(cos_g, np.eye(4)) - _kron_gen_spin(sin_g, K)
        Uinv = _kron_gen_spin(cos_g, np.eye(4)) + _kron_gen_spin(sin_g, K)
        sol = AxialSolution("spacelike", tuple(u), tuple(v), tuple(tau), tuple(d),
                            tuple(mb), tuple(nb), V, U, Uinv, {})
    return replace(sol, residuals=verify_conditions(sol, spec))


def _partial_trace(M: np.ndarray, g: int) -> np.ndarray:
    blocks = M.reshape(g, 4, g, 4)
    return blocks.sum(axis=(0, 2))


def _frob_fit(basis: np.ndarray, M: np.ndarray) -> complex:
    return np.trace(basis.conj().T @ M) / np.trace(basis.conj().T @ basis)


def _orthogonal_xis(v, rng) -> list:
    """Random vectors Minkowski-orthogonal to v (the regime of the conditions)."""
    v = np.asarray(v, dtype=float)
    vv = float(minkowski(v, v))
    xis = []
    for _ in range(4):
        x = rng.normal(size=4)
        if abs(vv) > 1e-12:
            x = x - float(minkowski(x, v)) / vv * v
        else:  # null v: subtract along a companion direction
            w = np.array([v[0], -v[1], -v[2], -v[3]])
            x = x - float(minkowski(x, v)) / float(minkowski(w, v)) * w
        xis.append(x)
    return xis


def verify_conditions(sol: AxialSolution, spec: MassSpectrum, seed: int = 421) -> dict:
    """Recompute the partial-trace conditions from U alone; max-norm residuals.

    cc0: pt(U xislash U^-1) proportional to xislash for xi orthogonal to v
    (plus xi = v); cc1: pt(U Y U^-1) proportional to 1; cc3: pt(U Y^3 U^-1)
    equals c3 * 1 + 8 gamma5 uslash; remY2: for xi orthogonal to v,
    pt(U Y^2 xislash U^-1) = c2 xislash - (sum m^2 d) gamma5 [xislash, vslash].
    """
    rng = np.random.default_rng(seed)
    g = spec.g
    m = spec.m
    U, Uinv = sol.U, sol.Uinv
    d = np.asarray(sol.d)
    v = np.asarray(sol.v, dtype=float)
    u = np.asarray(sol.u, dtype=float)
    I4 = np.eye(4)

    res = {}
    res["unitarity"] = float(np.linalg.norm(U @ Uinv - np.eye(4 * g)))

    if sol.V is not None:
        ell = np.ones(g, dtype=complex)
        res["mndef"] = float(max(
            np.linalg.norm(np.linalg.solve(sol.V, ell) - np.asarray(sol.mvec)),
            np.linalg.norm(sol.V @ ell - np.asarray(sol.nvec))))

    # cc0
    worst = 0.0
    for xi in _orthogonal_xis(v, rng) + [v]:
        xs = slash(xi)
        M = _partial_trace(U @ _kron_gen_spin(np.eye(g), xs) @ Uinv, g)
        c0 = _frob_fit(xs, M)
        worst = max(worst, float(np.linalg.norm(M - c0 * xs)))
    res["cc0"] = worst

    # cc1
    M1 = _partial_trace(U @ _kron_gen_spin(np.diag(m), I4) @ Uinv, g)
    c1 = _frob_fit(I4.astype(complex), M1)
    res["cc1"] = float(np.linalg.norm(M1 - c1 * I4))

    # cc3 with the axial term pinned to the requested u
    M3 = _partial_trace(U @ _kron_gen_spin(np.diag(m**3), I4) @ Uinv, g)
    c3 = np.trace(M3) / 4.0
    axial_part = 8.0 * (GAMMA5 @ slash(u))
    res["cc3"] = float(np.linalg.norm(M3 - c3 * I4 - axial_part))

    # Prop-style Y^2 decomposition for xi orthogonal to v
    worst = 0.0
    sm2d = float(np.sum(m**2 * d))
    for xi in _orthogonal_xis(v, rng):
        xs = slash(xi)
        vs = slash(v)
        M2 = _partial_trace(U @ _kron_gen_spin(np.diag(m**2), xs) @ Uinv, g)
        fixed = -sm2d * (GAMMA5 @ (xs @ vs - vs @ xs))
        rem = M2 - fixed
        c2 = _frob_fit(xs, rem)
        worst = max(worst, float(np.linalg.norm(rem - c2 * xs)))
    res["remY2"] = worst
    return res
