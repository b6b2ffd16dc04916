"""Exact checks of the Rankin-Cohen / holomorphic-projection combinatorics, and
the coefficients of the weight 2nu+3 cusp forms built from Zagier's class
number series and eta(8 tau)^3.

Everything is exact: rationals are ``Fraction`` and Gamma values at
half-integers are rational multiples of powers of sqrt(pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .classnumbers import ClassNumberTable, get_table
from .numtheory import kronecker_minus4

Rational = Fraction | int


# ---------------------------------------------------------------------------
# Gamma at integers and half-integers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqrtPiMultiple:
    """coeff * sqrt(pi)^power."""

    coeff: Fraction
    power: int = 0

    def __mul__(self, other):
        if isinstance(other, SqrtPiMultiple):
            return SqrtPiMultiple(self.coeff * other.coeff, self.power + other.power)
        return SqrtPiMultiple(self.coeff * Fraction(other), self.power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SqrtPiMultiple):
            return SqrtPiMultiple(self.coeff / other.coeff, self.power - other.power)
        return SqrtPiMultiple(self.coeff / Fraction(other), self.power)

    def __neg__(self):
        return SqrtPiMultiple(-self.coeff, self.power)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtPiMultiple(Fraction(other))
        if self.coeff == 0:
            return other
        if other.coeff == 0:
            return self
        if other.power != self.power:
            raise ValueError("cannot add different powers of sqrt(pi)")
        return SqrtPiMultiple(self.coeff + other.coeff, self.power)

    __radd__ = __add__

    def rational(self) -> Fraction:
        """The value when no sqrt(pi) is left."""
        if self.coeff != 0 and self.power != 0:
            raise ValueError(f"not rational: carries sqrt(pi)^{self.power}")
        return self.coeff

    def __float__(self) -> float:
        return float(self.coeff) * math.pi ** (self.power / 2)


ZERO = SqrtPiMultiple(Fraction(0))


def gamma_exact(x: Rational) -> SqrtPiMultiple:
    """Gamma(x) for integer or half-integer x (poles raise)."""
    x = Fraction(x)
    if x.denominator == 1:
        n = x.numerator
        if n <= 0:
            raise ZeroDivisionError(f"Gamma has a pole at {n}")
        return SqrtPiMultiple(Fraction(math.factorial(n - 1)))
    if x.denominator != 2:
        raise ValueError(f"Gamma({x}) is not a sqrt(pi) multiple")
    # walk from Gamma(1/2) = sqrt(pi) with Gamma(y + 1) = y Gamma(y)
    c, y = Fraction(1), Fraction(1, 2)
    while y < x:
        c *= y
        y += 1
    while y > x:
        y -= 1
        c /= y
    return SqrtPiMultiple(c, 1)


def gen_binom(x: Rational, n: int) -> Fraction:
    """x choose n by the falling factorial; 0 for n < 0."""
    if n < 0:
        return Fraction(0)
    x = Fraction(x)
    out = Fraction(1)
    for i in range(n):
        out *= (x - i) / (i + 1)
    return out


def inv_factorial(n: int) -> Fraction:
    """1/n!, with 1/n! = 0 at negative n (poles of Gamma)."""
    return Fraction(0) if n < 0 else Fraction(1, math.factorial(n))


def multinomial(n: int, *parts: int) -> int:
    if sum(parts) != n or min(parts) < 0:
        raise ValueError("parts must be nonnegative and sum to n")
    out = math.factorial(n)
    for k in parts:
        out //= math.factorial(k)
    return out


# ---------------------------------------------------------------------------
# P_{a,b} polynomials and the combinatorial lemmas
# ---------------------------------------------------------------------------

def pab(a: int, b: Rational, X: Rational, Y: Rational) -> Fraction:
    """sum_{j=0}^{a-2} C(j+b-2, j) X^j (X+Y)^(a-j-2)."""
    if a < 2:
        raise ValueError("P_{a,b} needs a >= 2")
    b, X, Y = Fraction(b), Fraction(X), Fraction(Y)
    return sum((gen_binom(j + b - 2, j) * X**j * (X + Y) ** (a - j - 2) for j in range(a - 1)),
               Fraction(0))


def pab_alternate(a: int, b: Rational, X: Rational, Y: Rational) -> Fraction:
    """sum_j C(a+b-3, a-2-j) C(j+b-2, j) (X+Y)^(a-2-j) (-Y)^j, valid for b != 1, 2."""
    if a < 2:
        raise ValueError("P_{a,b} needs a >= 2")
    b, X, Y = Fraction(b), Fraction(X), Fraction(Y)
    return sum((gen_binom(a + b - 3, a - 2 - j) * gen_binom(j + b - 2, j)
                * (X + Y) ** (a - 2 - j) * (-Y) ** j for j in range(a - 1)), Fraction(0))


def comb_lemma_check(nu: int, j: int) -> tuple[Fraction, Fraction]:
    """Alternating multinomial sum against 2^(4nu+2) (-1)^j (2nu-j+1)! j! / ((2j)! (2nu-2j+2)!)."""
    if nu < 1 or j < 0:
        raise ValueError("needs nu >= 1, j >= 0")
    lhs = Fraction(0)
    for mu in range(nu + 1):
        lhs += (Fraction((-1) ** mu) / (mu - j + Fraction(1, 2))
                * multinomial(4 * nu - 2 * mu + 1, 2 * nu - mu, mu, 2 * nu - 2 * mu + 1))
    if 2 * nu - j + 1 < 0:
        rhs = Fraction(0)
    else:
        rhs = (Fraction(2 ** (4 * nu + 2) * (-1) ** j * math.factorial(2 * nu - j + 1) * math.factorial(j),
                        math.factorial(2 * j)) * inv_factorial(2 * nu - 2 * j + 2))
    return lhs, rhs


def comb_lemma2_part1(nu: int, mu: int, central: int | None = None) -> tuple[Fraction, Fraction]:
    """C(nu+1/2, nu-mu) C(nu+1/2, mu) against 2^(-2nu-1) C(central, nu+1) C(2nu+2, 2mu+1).

    ``central`` defaults to 2nu+1.
    """
    if not 0 <= mu <= nu:
        raise ValueError("needs 0 <= mu <= nu")
    h = Fraction(1, 2)
    c = 2 * nu + 1 if central is None else central
    lhs = gen_binom(nu + h, nu - mu) * gen_binom(nu + h, mu)
    rhs = Fraction(math.comb(c, nu + 1) * math.comb(2 * nu + 2, 2 * mu + 1), 2 ** (2 * nu + 1))
    return lhs, rhs


def comb_lemma2_part2(nu: int, mu: int, j: int) -> tuple[Fraction, Fraction]:
    if not 0 <= mu <= nu or j < 0:
        raise ValueError("needs 0 <= mu <= nu and j >= 0")
    h = Fraction(1, 2)
    lhs = gen_binom(2 * nu - mu + h, 2 * nu + 1 - j) * gen_binom(j - mu - 3 * h, j)
    rhs = (Fraction((-1) ** (mu + 1)) / (j - mu - h) / 2 ** (4 * nu + 2)
           * math.factorial(4 * nu - 2 * mu + 1) * math.factorial(2 * mu + 1)
           / (math.factorial(2 * nu - mu) * math.factorial(mu) * math.factorial(j))
           * inv_factorial(2 * nu - j + 1))
    return lhs, rhs


def comb_lemma2_checks(nu: int, mu: int, j: int) -> tuple[bool, bool]:
    a1, b1 = comb_lemma2_part1(nu, mu)
    a2, b2 = comb_lemma2_part2(nu, mu, j)
    return a1 == b1, a2 == b2


def prop_poly_sides(nu: int, u: int, v: int, central: int | None = None) -> tuple[Fraction, Fraction]:
    """Both sides of the polynomial identity at m = u^2, n = v^2.

    Left: 2^(-2nu-1) C(central, nu+1) m^(-1/2) (m^(1/2) - n^(1/2))^(2nu+2).
    Right: sum_mu C(1/2+nu, nu-mu) C(1/2+nu, mu) m^(nu-mu)
           (m^(mu-2nu-1/2) P_{3+2nu, 1/2-mu}(m-n, n) - n^(1/2+mu)).
    """
    if not u > v >= 1:
        raise ValueError("needs u > v >= 1")
    c = 2 * nu + 1 if central is None else central
    m, n = u * u, v * v
    h = Fraction(1, 2)
    lhs = Fraction(math.comb(c, nu + 1), 2 ** (2 * nu + 1)) * Fraction((u - v) ** (2 * nu + 2), u)
    rhs = Fraction(0)
    for mu in range(nu + 1):
        coef = gen_binom(h + nu, nu - mu) * gen_binom(h + nu, mu) * m ** (nu - mu)
        inner = Fraction(u) ** (2 * mu - 4 * nu - 1) * pab(3 + 2 * nu, h - mu, m - n, n) - v ** (2 * mu + 1)
        rhs += coef * inner
    return lhs, rhs


def prop_poly_identity_check(nu: int, u: int, v: int) -> bool:
    lhs, rhs = prop_poly_sides(nu, u, v)
    return lhs == rhs


def cohen_terms(n: int) -> list[Fraction]:
    return [Fraction((-1) ** t * math.factorial(2 * n - t),
                     math.factorial(t) * math.factorial(n - t) * math.factorial(n + 1 - t))
            for t in range(n + 1)]


def cohen_vanishing(n: int) -> Fraction:
    """sum_t (-1)^t (2n-t)! / (t! (n-t)! (n+1-t)!); zero for n >= 1."""
    if n < 1:
        raise ValueError("needs n >= 1")
    return sum(cohen_terms(n), Fraction(0))


# ---------------------------------------------------------------------------
# holomorphic projection coefficients
# ---------------------------------------------------------------------------

_KL = {(Fraction(3, 2), Fraction(3, 2)), (Fraction(3, 2), Fraction(1, 2))}


def kappa(k: Rational, l: Rational, nu: int) -> SqrtPiMultiple:
    """1/((k+l+2nu-2)! (k-1)) sum_mu Gamma(2-k)Gamma(l+2nu-mu)/Gamma(2-k-mu) C(k+nu-1, nu-mu) C(l+nu-1, mu)."""
    k, l = Fraction(k), Fraction(l)
    if (k, l) not in _KL:
        raise ValueError("kappa is implemented for k = 3/2 and l in {1/2, 3/2}")
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    total = ZERO
    for mu in range(nu + 1):
        g = gamma_exact(2 - k) * gamma_exact(l + 2 * nu - mu) / gamma_exact(2 - k - mu)
        total = total + g * (gen_binom(k + nu - 1, nu - mu) * gen_binom(l + nu - 1, mu))
    # (k+l+2nu-2)! as Gamma(k+l+2nu-1)
    return total / gamma_exact(k + l + 2 * nu - 1) / (k - 1)


def mertens_br_coefficient(r: int, nu: int, c_minus: Mapping[int, SqrtPiMultiple | Rational],
                           a_g: Mapping[int, Rational], sqrt_of: Callable[[int], int] = math.isqrt,
                           k: Rational = Fraction(3, 2), l: Rational = Fraction(3, 2)) -> SqrtPiMultiple:
    """b(r) of the projected non-holomorphic part, for k = 3/2.

    The sums run over m - n = r with m in the support of ``a_g`` and n in the
    support of ``c_minus``.  Both supports must be perfect squares so every
    half-integral power is exact.
    """
    k, l = Fraction(k), Fraction(l)
    if k != Fraction(3, 2) or l.denominator != 2:
        raise ValueError("only k = 3/2 with half-integral l is supported")
    total = ZERO
    for m, am in a_g.items():
        n = m - r
        if n <= 0 or n not in c_minus or am == 0:
            continue
        cn = c_minus[n]
        cn = cn if isinstance(cn, SqrtPiMultiple) else SqrtPiMultiple(Fraction(cn))
        rm, rn = sqrt_of(m), sqrt_of(n)
        if rm * rm != m or rn * rn != n:
            raise ValueError("supports must be perfect squares")
        inner = Fraction(0)
        for mu in range(nu + 1):
            coef = gen_binom(k + nu - 1, nu - mu) * gen_binom(l + nu - 1, mu) * Fraction(m) ** (nu - mu)
            e_m = mu - 2 * nu - l + 1  # half-integral exponent of m
            e_n = k + mu - 1
            pm = Fraction(rm) ** int(2 * e_m)
            pn = Fraction(rn) ** int(2 * e_n)
            inner += coef * (pm * pab(int(k + l + 2 * nu), 2 - k - mu, r, n) - pn)
        total = total + cn * (Fraction(am) * inner)
    return -gamma_exact(1 - k) * total


def zagier_c_minus(N: int) -> dict[int, SqrtPiMultiple]:
    """Coefficients of the non-holomorphic part of Zagier's series: 1/(4 sqrt(pi)) at squares."""
    c = SqrtPiMultiple(Fraction(1, 4), -1)
    return {t * t: c for t in range(1, math.isqrt(N) + 1)}


def eta8_cubed(N: int) -> dict[int, int]:
    """eta(8 tau)^3 = sum_{t odd > 0} chi_{-4}(t) t q^(t^2), up to q^N."""
    return {t * t: kronecker_minus4(t) * t for t in range(1, math.isqrt(N) + 1, 2)}


# ---------------------------------------------------------------------------
# formal q-series and the cusp form coefficients
# ---------------------------------------------------------------------------

def rankin_cohen_bracket(f: Sequence[Rational], g: Sequence[Rational], k: Rational, l: Rational,
                         nu: int) -> list[Fraction]:
    """[f, g]_nu on q-expansions (d/dtau acts as n on the n-th coefficient, up to 2 pi i)."""
    N = min(len(f), len(g))
    k, l = Fraction(k), Fraction(l)
    weights = [((-1) ** r * gen_binom(k + nu - 1, nu - r) * gen_binom(l + nu - 1, r), r, nu - r)
               for r in range(nu + 1)]
    f = [Fraction(x) for x in f[:N]]
    g = [Fraction(x) for x in g[:N]]
    gnz = [(b, gb) for b, gb in enumerate(g) if gb != 0]
    out = [Fraction(0)] * N
    for b, gb in gnz:
        for a in range(N - b):
            fa = f[a]
            if fa == 0:
                continue
            out[a + b] += fa * gb * sum(w * Fraction(a) ** r * Fraction(b) ** s for w, r, s in weights)
    return out


def hurwitz_series(N: int, table: ClassNumberTable | None = None) -> list[Fraction]:
    """H*(0), ..., H*(N-1) with H*(0) = -1/12."""
    table = table if table is not None else get_table(N)
    return [table.Hstar(n) for n in range(N)]


def _chi(n: int) -> int:
    return kronecker_minus4(n)


def cusp_coeffs_2f1(N: int, nu: int = 0, table: ClassNumberTable | None = None) -> list[Fraction]:
    """c(0), ..., c(N) of the weight 2nu+3 cusp form on Gamma_0(64).

    c(n) = sum_j (-1)^j C(nu+1/2, j) C(nu+1/2, nu-j) sum_{s = 1 (4)} s^(2nu-2j+1) (n-s^2)^j H*(n-s^2)
         + 2^(-2nu-2) C(2nu+1, nu+1) sum_{t^2-l^2=n; t,l>=1} chi_{-4}(t) (t-l)^(2nu+2)
         + kappa/(8 sqrt(pi)) chi_{-4}(sqrt n) sqrt(n)^(2nu+2)   (n a square)
    """
    table = table if table is not None else get_table(N)
    if table.N < N:
        raise ValueError(f"class table bound {table.N} is below {N}")
    h = Fraction(1, 2)
    wj = [(-1) ** j * gen_binom(nu + h, j) * gen_binom(nu + h, nu - j) for j in range(nu + 1)]
    mid = Fraction(math.comb(2 * nu + 1, nu + 1), 2 ** (2 * nu + 2))
    last = (kappa(Fraction(3, 2), Fraction(3, 2), nu) / SqrtPiMultiple(Fraction(8), 1)).rational()
    out = [Fraction(0)] * (N + 1)
    root = math.isqrt(N)
    # class-number term: s runs over 1, -3, 5, -7, ...
    for t in range(1, root + 1, 2):
        s = _chi(t) * t
        for n in range(t * t, N + 1):
            d = n - t * t
            hs = table.Hstar12[d]
            if hs:
                out[n] += Fraction(int(hs), 12) * sum(w * Fraction(s) ** (2 * nu - 2 * j + 1) * d**j
                                                      for j, w in enumerate(wj))
    # t^2 - l^2 = n with t > l >= 1: t - l = a, t + l = b, a b = n, a < b, same parity
    for a in range(1, math.isqrt(N) + 1):
        for b in range(a + 2, N // a + 1, 2):
            t = (a + b) // 2
            c = _chi(t)
            if c:
                out[a * b] += mid * c * a ** (2 * nu + 2)
    for t in range(1, root + 1):
        c = _chi(t)
        if c:
            out[t * t] += last * c * t ** (2 * nu + 2)
    return out


def deligne_ratios(coeffs: Sequence[Fraction], nu: int = 0, exponent: float | None = None,
                   sizes: Sequence[int] = (512, 1024, 2048, 4096)) -> list[float]:
    """max_{n in [N/2, N]} |c(n)| / n^e for each N; e defaults to (2nu+2)/2 + 1/4."""
    e = (nu + 1) + 0.25 if exponent is None else exponent
    out = []
    for N in sizes:
        out.append(max(abs(float(coeffs[n])) / n**e for n in range(N // 2, N + 1)))
    return out


def divisor_counts(N: int) -> np.ndarray:
    d = np.zeros(N + 1, dtype=np.int64)
    for k in range(1, N + 1):
        d[k::k] += 1
    return d


def deligne_normalized_ratios(coeffs: Sequence[Fraction], nu: int = 0,
                              sizes: Sequence[int] = (512, 1024, 2048, 4096)) -> list[float]:
    """max_{n in [N/2, N]} |c(n)| / (d(n) n^(nu+1)), the Deligne-scale ratio per window."""
    d = divisor_counts(max(sizes))
    out = []
    for N in sizes:
        out.append(max(abs(float(coeffs[n])) / (int(d[n]) * n ** (nu + 1)) for n in range(N // 2, N + 1)))
    return out


def bracket_decomposition_mismatch(N: int, nu: int, table: ClassNumberTable | None = None) -> int | None:
    """First n <= N where cusp_coeffs_2f1 differs from [H+, eta(8tau)^3]_nu + b(n) + the kappa term.

    Returns None when all coefficients agree.
    """
    table = table if table is not None else get_table(N)
    h = Fraction(3, 2)
    H = hurwitz_series(N + 1, table)
    g = [0] * (N + 1)
    for m, v in eta8_cubed(N).items():
        g[m] = v
    bracket = rankin_cohen_bracket(H, g, h, h, nu)
    full = cusp_coeffs_2f1(N, nu, table)
    last = (kappa(h, h, nu) / SqrtPiMultiple(Fraction(8), 1)).rational()
    # b(n) only sees squares m, n' with m - n' = n, so m <= ((n+1)/2)^2
    M = ((N + 1) // 2 + 1) ** 2
    cm, ag = zagier_c_minus(M), eta8_cubed(M)
    for n in range(1, N + 1):
        b = mertens_br_coefficient(n, nu, cm, ag).rational()
        r = math.isqrt(n)
        tail = last * kronecker_minus4(r) * n ** (nu + 1) if r * r == n else 0
        if full[n] - bracket[n] != b + tail:
            return n
    return None
