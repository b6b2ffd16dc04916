"""Class numbers of imaginary quadratic orders and Hurwitz-type sums.

h(-d) is counted directly from reduced primitive binary quadratic forms.
H*(D) is stored as the integer 12*H*(D) so every value stays exact.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numtheory import divisors, is_prime, kronecker_minus4, legendre_symbol, prime_power


def _omega(d: np.ndarray) -> np.ndarray:
    w = np.ones_like(d)
    w[d == 3] = 3
    w[d == 4] = 2
    return w


def _valid_disc(d: np.ndarray) -> np.ndarray:
    return (d >= 3) & ((d % 4 == 0) | (d % 4 == 3))


def count_reduced_forms(N: int) -> np.ndarray:
    """h[d] = number of reduced primitive forms of discriminant -d, for d <= N.

    Reduced: |b| <= a <= c, and b >= 0 whenever |b| = a or a = c.
    """
    h = np.zeros(N + 1, dtype=np.int64)
    amax = math.isqrt(N // 3)
    for a in range(1, amax + 1):
        ds, ws = [], []
        for b in range(0, a + 1):
            cmax = (N + b * b) // (4 * a)
            if cmax < a:
                continue
            c = np.arange(a, cmax + 1, dtype=np.int64)
            c = c[np.gcd(math.gcd(a, b), c) == 1]
            ds.append(4 * a * c - b * b)
            # (a, -b, c) is a distinct reduced form unless b = 0, b = a or a = c
            ws.append(np.where((b > 0) & (b < a) & (c > a), 2, 1))
        if ds:
            h += np.bincount(np.concatenate(ds), weights=np.concatenate(ws),
                             minlength=N + 1).astype(np.int64)
    return h


@dataclass(frozen=True, eq=False)
class ClassNumberTable:
    """h, omega, H and 12*H* for 0 <= D <= N."""

    N: int
    h: np.ndarray
    omega: np.ndarray
    Hbig: np.ndarray
    Hstar12: np.ndarray

    def _in_range(self, D: int) -> bool:
        if D > self.N:
            raise ValueError(f"D={D} exceeds the class table bound {self.N}")
        return D >= 0

    def class_number(self, d: int) -> int:
        return int(self.h[d]) if self._in_range(d) else 0

    def H(self, D: int) -> int:
        return int(self.Hbig[D]) if self._in_range(D) else 0

    def Hstar(self, D: int) -> Fraction:
        return Fraction(int(self.Hstar12[D]), 12) if self._in_range(D) else Fraction(0)

    def hstar_array(self, D: np.ndarray) -> np.ndarray:
        """12*H* at an integer array of arguments (0 where D < 0)."""
        D = np.asarray(D, dtype=np.int64)
        if D.size and D.max() > self.N:
            raise ValueError(f"D={int(D.max())} exceeds the class table bound {self.N}")
        out = np.zeros(D.shape, dtype=np.int64)
        ok = D >= 0
        out[ok] = self.Hstar12[D[ok]]
        return out

    def to_csv(self) -> str:
        """`d,h,omega,H,Hstar` per valid discriminant, rationals as num/den."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d", "h", "omega", "H", "Hstar"])
        keep = _valid_disc(np.arange(self.N + 1))
        keep[0] = True
        for d in np.nonzero(keep)[0].tolist():
            hs = self.Hstar(d)
            w.writerow([d, int(self.h[d]), int(self.omega[d]), self.H(d),
                        f"{hs.numerator}/{hs.denominator}"])
        return buf.getvalue()


def tabulate(N: int) -> ClassNumberTable:
    if N < 4:
        raise ValueError("class table bound must be at least 4")
    h = count_reduced_forms(N)
    d = np.arange(N + 1, dtype=np.int64)
    omega = _omega(d)
    valid = _valid_disc(d)
    h[~valid] = 0
    w12 = np.where(valid, 12 * h // omega, 0)

    Hbig = np.zeros(N + 1, dtype=np.int64)
    Hs12 = np.zeros(N + 1, dtype=np.int64)
    for f in range(1, math.isqrt(N) + 1):
        m = N // (f * f)
        Hbig[f * f * d[: m + 1]] += h[: m + 1]
        Hs12[f * f * d[: m + 1]] += w12[: m + 1]
    Hbig[0] = 0
    Hs12[0] = -1
    for arr in (h, omega, Hbig, Hs12):
        arr.setflags(write=False)
    return ClassNumberTable(N, h, omega, Hbig, Hs12)


_TABLE: ClassNumberTable | None = None


def get_table(N: int) -> ClassNumberTable:
    """A shared table covering at least N (grown geometrically)."""
    global _TABLE
    if _TABLE is None or _TABLE.N < N:
        size = max(N, 4, 2 * _TABLE.N if _TABLE is not None else 0)
        _TABLE = tabulate(size)
    return _TABLE


# ---------------------------------------------------------------------------

def _s_formula(p: int) -> int:
    num = p + 6 - 4 * legendre_symbol(-3, p) - 3 * kronecker_minus4(p)
    assert num % 12 == 0 and num >= 0
    return num // 12


@lru_cache(maxsize=None)
def supersingular_count(p: int) -> int:
    """S(p) = (p + 6 - 4(-3|p) - 3(-4|p)) / 12."""
    if p < 5 or not is_prime(p):
        raise ValueError("supersingular_count needs a prime p >= 5")
    return _s_formula(p)


SCHOOF_OK = "ok"
SCHOOF_ZERO = "zero"
SCHOOF_SILENT = "silent"


def schoof_count(q: int, s: int, n: int, table: ClassNumberTable | None = None) -> tuple[int, str]:
    """Isomorphism classes over F_q with q + 1 - s points and (Z/n)^2 inside.

    Returns ``(count, flag)``; ``flag`` is "ok" for a count given by the
    theorem, "zero" when the theorem rules such curves out, and "silent" when
    none of its cases applies (the count 0 is then a placeholder).
    """
    pr = prime_power(q)
    if pr is None or pr[0] < 3:
        raise ValueError(f"q={q} is not a power of an odd prime")
    p, r = pr
    if n < 1:
        raise ValueError("n must be positive")
    if s * s > 4 * q or (q + 1 - s) % (n * n) != 0:
        # Hasse, or (Z/n)^2 cannot sit inside a group of order q + 1 - s
        return 0, SCHOOF_ZERO
    if s != 0 and s % p == 0 and s * s != 4 * q and n >= 2:
        return 0, SCHOOF_ZERO
    if r % 2 == 0 and s * s == 4 * q:
        # the same formula also matches the census at p = 3
        return (_s_formula(p), SCHOOF_OK) if n == 2 else (0, SCHOOF_SILENT)
    if s % p != 0 and (q - 1) % n == 0:
        D = (4 * q - s * s) // (n * n)
        tab = table if table is not None else get_table(D)
        return tab.H(D), SCHOOF_OK
    return 0, SCHOOF_SILENT


def eichler_lambda1(N: int) -> Fraction:
    return Fraction(sum(min(d, N // d) for d in divisors(N)), 2)


def eichler_check(N: int, table: ClassNumberTable | None = None) -> tuple[Fraction, Fraction]:
    """(sum_{s^2 <= N} H*(N - s^2), -lambda_1(N) + sigma_1(N)/3) for odd N."""
    if N < 1 or N % 2 == 0:
        raise ValueError("eichler_check needs an odd positive N")
    tab = table if table is not None else get_table(N)
    r = math.isqrt(N)
    s = np.arange(-r, r + 1, dtype=np.int64)
    lhs = Fraction(int(tab.hstar_array(N - s * s).sum()), 12)
    rhs = -eichler_lambda1(N) + Fraction(sum(divisors(N)), 3)
    return lhs, rhs


def hstar_bound(D: int) -> float:
    """sqrt(D) (log D + 2) / pi."""
    return math.sqrt(D) * (math.log(D) + 2) / math.pi
