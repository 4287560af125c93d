"""Symbolic simple fractions in the regularized light-cone factors T^(n)_[p].

Factors commute like complex scalars, so a simple fraction is a pair of
factor multisets (numerator, denominator) with an exact scalar coefficient
in Q[pi, 1/pi].  The module provides the degree grading, the derivation
nabla (T^(n) -> T^(n-1), extended by Leibniz/quotient rules), the z-factor
contraction rule, an integration-by-parts equivalence test, and the encoded
basic fractions c0..c3 and N1..N6 of the degree-four analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DegreeMismatch, UnsupportedFactor


@dataclass(frozen=True, order=True)
class Factor:
    """One regularized factor T^(n)_[p] (or curly T^(n)_{p}), possibly conjugated.

    The factors appearing in the light-cone expansion have n >= -1; lower
    orders only arise as formal images of the derivation nabla and are kept
    representable so that nabla closes on fraction sums.
    """

    n: int
    p: int = 0
    conjugated: bool = False
    curly: bool = False

    @property
    def degree(self) -> int:
        return 1 - self.n

    def conj(self) -> "Factor":
        return Factor(self.n, self.p, not self.conjugated, self.curly)

    def shift(self, dn: int) -> "Factor":
        return Factor(self.n + dn, self.p, self.conjugated, self.curly)

    def render(self) -> str:
        bar = ",bar" if self.conjugated else ""
        if self.curly:
            return f"T{{{self.n},{self.p}{bar}}}"
        return f"T({self.n},{self.p}{bar})"


class Coefficient:
    """Exact scalar sum_k q_k * pi^k with rational q_k."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, q in dict(terms).items():
                q = Fraction(q)
                if q != 0:
                    self.terms[int(k)] = q

    @classmethod
    def of(cls, q, pi_power: int = 0) -> "Coefficient":
        return cls({pi_power: Fraction(q)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, q in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + q
        return Coefficient(out)

    def __neg__(self):
        return Coefficient({k: -q for k, q in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Coefficient):
            out = {}
            for k1, q1 in self.terms.items():
                for k2, q2 in other.terms.items():
                    k = k1 + k2
                    out[k] = out.get(k, Fraction(0)) + q1 * q2
            return Coefficient(out)
        return Coefficient({k: q * Fraction(other) for k, q in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def value(self) -> float:
        import math
        return sum(float(q) * math.pi**k for k, q in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms):
            q = self.terms[k]
            bits.append(f"{q}" + ("" if k == 0 else f"*pi^{k}"))
        return " + ".join(bits)


ONE = Coefficient.of(1)


def _sorted_key(factors: Iterable[Factor]) -> tuple:
    return tuple(sorted(factors))


@dataclass(frozen=True)
class SimpleFraction:
    """coefficient * (product of numerator factors) / (product of denominator factors).

    Canonical form: factors sorted, common factors cancelled between
    numerator and denominator; equality and hashing act on that form.
    """

    numerator: tuple
    denominator: tuple
    coefficient: Coefficient

    @classmethod
    def make(cls, numerator, denominator=(), coefficient=ONE) -> "SimpleFraction":
        num = list(numerator)
        den = list(denominator)
        # cancel common factors (multiset difference)
        for f in list(den):
            if f in num:
                num.remove(f)
                den.remove(f)
        return cls(_sorted_key(num), _sorted_key(den), coefficient)

    @property
    def monomial(self) -> tuple:
        return (self.numerator, self.denominator)

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.numerator) - sum(f.degree for f in self.denominator)

    def conj(self) -> "SimpleFraction":
        return SimpleFraction.make(
            [f.conj() for f in self.numerator],
            [f.conj() for f in self.denominator],
            self.coefficient,
        )

    def scaled(self, c) -> "SimpleFraction":
        c = c if isinstance(c, Coefficient) else Coefficient.of(c)
        return SimpleFraction(self.numerator, self.denominator, self.coefficient * c)

    def render(self) -> str:
        num = "*".join(f.render() for f in self.numerator) or "1"
        s = f"{self.coefficient!r} * {num}"
        if self.denominator:
            s += " / " + "*".join(f.render() for f in self.denominator)
        return s


class FractionSum:
    """Finite linear combination of simple fractions, normalized by monomial."""

    def __init__(self, terms: Iterable[SimpleFraction] = ()):
        merged: dict = {}
        for t in terms:
            key = t.monomial
            if key in merged:
                merged[key] = SimpleFraction(t.numerator, t.denominator,
                                             merged[key].coefficient + t.coefficient)
            else:
                merged[key] = t
        self.terms = tuple(t for t in merged.values() if not t.coefficient.is_zero)

    def __add__(self, other):
        return FractionSum(self.terms + other.terms)

    def __sub__(self, other):
        return FractionSum(self.terms + tuple(t.scaled(-1) for t in other.terms))

    def scaled(self, c) -> "FractionSum":
        return FractionSum(t.scaled(c) for t in self.terms)

    def conj(self) -> "FractionSum":
        return FractionSum(t.conj() for t in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {t.degree for t in self.terms}

    def render(self) -> str:
        return " + ".join(t.render() for t in self.terms) or "0"

    def __iter__(self):
        return iter(self.terms)


def degree(f: SimpleFraction) -> int:
    return f.degree


def nabla_fraction(f: SimpleFraction) -> FractionSum:
    """Apply the derivation nabla T^(n) = T^(n-1) with Leibniz + quotient rules."""
    out = []
    num = list(f.numerator)
    den = list(f.denominator)
    for i, fac in enumerate(num):
        shifted = num[:i] + [fac.shift(-1)] + num[i + 1:]
        out.append(SimpleFraction.make(shifted, den, f.coefficient))
    for i, fac in enumerate(den):
        # quotient rule: - N * fac' / (D * fac)
        out.append(SimpleFraction.make(num + [fac.shift(-1)], den + [fac],
                                       f.coefficient * (-1)))
    return FractionSum(out)


def nabla(f) -> FractionSum:
    if isinstance(f, SimpleFraction):
        return nabla_fraction(f)
    total = FractionSum()
    for t in f:
        total = total + nabla_fraction(t)
    return total


def contract_z(n: int, p: int) -> FractionSum:
    """z^(n)_[p] T^(n)_[p] = -4 ( n T^(n+1)_[p] + T^(n+2)_{p} )."""
    if n < -1:
        raise UnsupportedFactor(f"n={n} < -1")
    terms = []
    if n != 0:
        terms.append(SimpleFraction.make([Factor(n + 1, p)], coefficient=Coefficient.of(-4 * n)))
    terms.append(SimpleFraction.make([Factor(n + 2, p, curly=True)], coefficient=Coefficient.of(-4)))
    return FractionSum(terms)


def _as_sum(x) -> FractionSum:
    if isinstance(x, FractionSum):
        return x
    if isinstance(x, SimpleFraction):
        return FractionSum([x])
    return FractionSum(x)


def _monomial_table(sums):
    keys = []
    for s in sums:
        for t in s:
            if t.monomial not in keys:
                keys.append(t.monomial)
    return keys


def _coeff_vector(s: FractionSum, keys, pi_powers):
    """Exact rational coordinates of s in the (monomial x pi-power) basis."""
    vec = [Fraction(0)] * (len(keys) * len(pi_powers))
    for t in s:
        ki = keys.index(t.monomial)
        for pw, q in t.coefficient.terms.items():
            vec[ki * len(pi_powers) + pi_powers.index(pw)] += q
    return vec


def _rational_solve(columns, rhs) -> bool:
    """Exact test whether rhs lies in the span of the columns (Gaussian elimination)."""
    if all(x == 0 for x in rhs):
        return True
    if not columns:
        return False
    nrow = len(rhs)
    ncol = len(columns)
    A = [[columns[j][i] for j in range(ncol)] + [rhs[i]] for i in range(nrow)]
    row = 0
    for col in range(ncol):
        piv = next((r for r in range(row, nrow) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = Fraction(1, 1) / A[row][col]
        A[row] = [x * inv for x in A[row]]
        for r in range(nrow):
            if r != row and A[r][col] != 0:
                fac = A[r][col]
                A[r] = [x - fac * y for x, y in zip(A[r], A[row])]
        row += 1
        if row == nrow:
            break
    # consistent iff no row reduces to (0 ... 0 | nonzero)
    return not any(all(x == 0 for x in r[:-1]) and r[-1] != 0 for r in A)


MAX_GENERATORS = 200


def ibp_generators(diff: FractionSum) -> list:
    """Candidate fractions h of degree L+1 whose nabla may span the difference.

    Generated by shifting one factor order n -> n+1 in each monomial of the
    support (numerator positions), capped at MAX_GENERATORS; conservative.
    """
    gens = []
    seen = set()
    for t in diff:
        for i, fac in enumerate(t.numerator):
            num = list(t.numerator)
            num[i] = fac.shift(+1)
            h = SimpleFraction.make(num, t.denominator, ONE)
            if h.monomial not in seen:
                seen.add(h.monomial)
                gens.append(h)
                if len(gens) >= MAX_GENERATORS:
                    return gens
        for i, fac in enumerate(t.denominator):
            if fac.n <= -1:
                continue
            den = list(t.denominator)
            den[i] = fac.shift(-1)
            h = SimpleFraction.make(t.numerator, den, ONE)
            if h.monomial not in seen:
                seen.add(h.monomial)
                gens.append(h)
                if len(gens) >= MAX_GENERATORS:
                    return gens
    return gens


def ibp_equivalent(a, b) -> bool:
    """True iff a - b is certified to lie in the span of nabla(generators).

    Both arguments must be homogeneous of the same degree.  The test is
    conservative: False means "no certificate found with the generating set".
    """
    a = _as_sum(a)
    b = _as_sum(b)
    deg_a, deg_b = a.degrees(), b.degrees()
    if len(deg_a) > 1 or len(deg_b) > 1:
        raise DegreeMismatch("inputs must be homogeneous")
    if deg_a and deg_b and deg_a != deg_b:
        raise DegreeMismatch(f"degrees differ: {deg_a} vs {deg_b}")
    diff = a - b
    if diff.is_zero:
        return True
    gens = ibp_generators(diff)
    images = [nabla_fraction(h) for h in gens]
    keys = _monomial_table(images + [diff])
    pi_powers = sorted({pw for s in images + [diff] for t in s for pw in t.coefficient.terms})
    if not pi_powers:
        pi_powers = [0]
    cols = [_coeff_vector(img, keys, pi_powers) for img in images]
    rhs = _coeff_vector(diff, keys, pi_powers)
    return _rational_solve(cols, rhs)


# ----------------------------------------------------------------------------
# encoded basic fractions of the degree-four field equations
# ----------------------------------------------------------------------------

def _minus_cc_over(terms, den) -> FractionSum:
    """(sum of numerator products - c.c.) / den: the c.c. applies to the
    bracketed products only, the common denominator stays fixed."""
    s = _as_sum(terms)
    expanded = s - s.conj()
    return FractionSum(
        SimpleFraction.make(t.numerator, tuple(t.denominator) + tuple(den), t.coefficient)
        for t in expanded
    )


def _t(n, p, bar=False) -> Factor:
    return Factor(n, p, conjugated=bar)


def _times_t0_minus_cc(prefactor, factors) -> FractionSum:
    """prefactor * factors * (T00 - conj(T00)) / conj(T00), expanded.

    The conj(T00)/conj(T00) piece of the second summand cancels, leaving a
    denominator-free term.
    """
    den = [_t(0, 0, bar=True)]
    return FractionSum([
        SimpleFraction.make(list(factors) + [_t(0, 0)], den, Coefficient.of(prefactor)),
        SimpleFraction.make(list(factors), (), Coefficient.of(-prefactor)),
    ])


def encode_basic_fractions() -> list:
    """The four basic fractions c0..c3 as expanded FractionSums.

    c0, c2, c3 are (X - c.c.) pairs over the common denominator conj(T00);
    c1 is the single fraction -3^2 Tm1 conj(Tm1)(T00 - conj(T00))/conj(T00).
    The second numerator coefficient of c0 is 2*3^2 (not the misprinted 2*3):
    only 3^3 - 2*3^2 reproduces the displayed exponential/cutoff
    field-equation coefficients -1/2 and -3/4 under weak evaluation.
    """
    den = [_t(0, 0, bar=True)]

    c0 = _minus_cc_over([
        SimpleFraction.make([_t(0, 0), _t(0, 0), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(Fraction(27, 6))),
        SimpleFraction.make([_t(0, 1), _t(0, 2), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(Fraction(-18, 6))),
    ], den)
    c1 = _times_t0_minus_cc(-9, [_t(-1, 0), _t(-1, 0, True)])
    c2 = _minus_cc_over([
        SimpleFraction.make([_t(-1, 0), _t(0, 0), _t(0, 1, True), _t(0, 1, True)], (),
                            Coefficient.of(-6)),
    ], den)
    c3 = _minus_cc_over([
        SimpleFraction.make([_t(0, 1), _t(0, 2), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(-6)),
    ], den)
    return [c0, c1, c2, c3]


def encode_n_fractions(g: int = 3, moment2: float = 1.0) -> dict:
    """Encodings of the simple fractions N1..N6 for g generations.

    ``moment2`` stands for the scalar m*Yhat * sum_b m_b^2 d_b, which equals 1
    for the three-generation mixing solution.  Mass-moment prefactors (Yhat^2,
    YacuteYgrave and the s-constants slots) are returned separately so callers
    can assemble the field equation; the N4/N5 generation factors follow the
    corrected counting consistent with c0.
    """
    den = [_t(0, 0, bar=True)]
    q = Fraction(moment2).limit_denominator(10**12) if moment2 != 1.0 else Fraction(1)

    n1 = _minus_cc_over([
        SimpleFraction.make([_t(0, 0), _t(0, 0), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(Fraction(g**3, 6))),
        SimpleFraction.make([_t(1, 0), _t(-1, 0), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(Fraction(-2 * g**3, 6))),
    ], den)
    n2 = _minus_cc_over([
        SimpleFraction.make([_t(-1, 0), _t(0, 0), _t(0, 1, True), _t(0, 1, True)], (),
                            Coefficient.of(-2 * g)),      # carries Yhat^2
        SimpleFraction.make([_t(-1, 0), _t(1, 2), _t(-1, 0, True), _t(0, 0, True)], (),
                            Coefficient.of(-2 * g**2)),   # carries YacuteYgrave
    ], den)
    n3 = _minus_cc_over([
        SimpleFraction.make([_t(-1, 0), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient({-1: Fraction(g**2, 8)})),
    ], den)
    n4 = _minus_cc_over([
        SimpleFraction.make([_t(0, 1), _t(0, 2), _t(-1, 0, True), _t(0, 0, True)], (),
                            Coefficient.of(-2 * g**2 * q)),   # m Yhat sum m^2 d folded in
        SimpleFraction.make([_t(1, 3), _t(-1, 0), _t(-1, 0, True), _t(0, 0, True)], (),
                            Coefficient.of(2 * g**2)),        # sum m^3 d = 1 folded in
    ], den)
    n5 = _minus_cc_over([
        SimpleFraction.make([_t(0, 0), _t(0, 0), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(Fraction(g**3, 6))),
        SimpleFraction.make([_t(0, 2), _t(0, 1), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(Fraction(-g**2, 3) * q)),
    ], den)
    # the s_[0]-s_[3] slot of N5: + g^3/3 * Tm1 conj(Tm1)(T00 - conj(T00))/conj(T00)
    n5_s_slot = _times_t0_minus_cc(Fraction(g**3, 3), [_t(-1, 0), _t(-1, 0, True)])
    n6 = _minus_cc_over([
        SimpleFraction.make([_t(-1, 0), _t(0, 0), _t(0, 1, True), _t(0, 1, True)], (),
                            Coefficient.of(-2 * g)),          # carries Yhat^2
        SimpleFraction.make([_t(0, 2), _t(0, 1), _t(0, 0, True), _t(-1, 0, True)], (),
                            Coefficient.of(-2 * g * q)),      # carries YacuteYgrave
    ], den)
    n6_s_slot = _times_t0_minus_cc(2 * g**2, [_t(-1, 0), _t(-1, 0, True)])
    return {"N1": n1, "N2": n2, "N3": n3, "N4": n4,
            "N5": n5, "N5_s": n5_s_slot, "N6": n6, "N6_s": n6_s_slot}
