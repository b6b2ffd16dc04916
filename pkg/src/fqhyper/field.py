"""Explicit finite fields F_{p^r} with dense log/antilog, trace and character tables.

Elements are encoded as integers ``0 <= x < q``: the base-p digits of ``x`` are
the coefficients (constant term first) of a polynomial reduced modulo the
field's defining polynomial.  For ``r == 1`` this is just the residue mod p.

Multiplicative characters are indexed by ``j in range(q - 1)`` with
``chi_j(g**k) = exp(2*pi*i*j*k/(q-1))`` for the tabulated generator ``g`` and
``chi_j(0) = 0`` for every ``j`` (including the trivial character).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import FIELD_CAP
from .numtheory import factorint, is_prime, prime_factors


class FieldError(ValueError):
    """Invalid field parameters (non-prime p, small characteristic, bad degree)."""


class CapExceeded(FieldError):
    """The requested field is larger than the configured cap."""


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p (coefficient lists, constant term first)
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_mod(out, m, p)


def _poly_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(list(a), m, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(m: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial ``m`` (constant term first) over F_p."""
    r = len(m) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**r, m, p), x, p):
        return False
    for ell in prime_factors(r):
        h = _poly_sub(_poly_powmod(x, p ** (r // ell), m, p), x, p)
        if len(_poly_gcd(m, h, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, r: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree r.

    Coefficient vectors are compared from the x^{r-1} coefficient down to the
    constant term, so the constant term varies fastest.
    """
    if r == 1:
        return [0, 1]
    for code in range(p**r):
        coeffs = [(code // p**i) % p for i in range(r)]  # coeffs[0] = constant term
        if coeffs[0] == 0:
            continue
        m = coeffs + [1]
        if is_irreducible(m, p):
            return m
    raise AssertionError(f"no irreducible polynomial of degree {r} over F_{p}")


# ---------------------------------------------------------------------------
# the field table
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldTable:
    """A fully tabulated finite field.  Immutable once built.

    ``exp[k] = g**k`` for ``0 <= k < q - 1``; ``dlog[x]`` is the inverse with the
    sentinel ``dlog[0] = -1``.  ``phi`` is the quadratic character with
    ``phi[0] = 0``.
    """

    p: int
    r: int
    q: int
    modulus: tuple[int, ...]
    generator: int
    exp: np.ndarray = field(repr=False)
    dlog: np.ndarray = field(repr=False)
    abs_trace: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    digits: np.ndarray = field(repr=False)

    # -- element arithmetic (scalars or integer arrays) ---------------------

    @property
    def order(self) -> int:
        return self.q - 1

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.r, dtype=np.int64)

    def encode(self, digit_rows: np.ndarray) -> np.ndarray:
        return np.asarray(digit_rows, dtype=np.int64) @ self._powers

    def element(self, coeffs) -> int:
        """Encode a coefficient sequence (constant term first) or an integer residue."""
        if isinstance(coeffs, (int, np.integer)):
            if self.r == 1:
                return int(coeffs) % self.p
            coeffs = [int(coeffs)]
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.r:
            raise FieldError("too many coefficients for this field")
        return int(sum(c * self.p**i for i, c in enumerate(coeffs)))

    def repr_element(self, x: int) -> str:
        if self.r == 1:
            return str(int(x))
        return " ".join(str(int(d)) for d in self.digits[x])

    @staticmethod
    def _ret(v):
        return v if np.ndim(v) else int(v)

    def add(self, x, y):
        if self.r == 1:
            return self._ret((np.asarray(x, dtype=np.int64) + y) % self.p)
        return self._ret(self.encode((self.digits[x] + self.digits[y]) % self.p))

    def neg(self, x):
        if self.r == 1:
            return self._ret((-np.asarray(x, dtype=np.int64)) % self.p)
        return self._ret(self.encode((-self.digits[x]) % self.p))

    def sub(self, x, y):
        if self.r == 1:
            return self._ret((np.asarray(x, dtype=np.int64) - y) % self.p)
        return self._ret(self.encode((self.digits[x] - self.digits[y]) % self.p))

    def mul(self, x, y):
        if self.r == 1:
            return self._ret((np.asarray(x, dtype=np.int64) * y) % self.p)
        x = np.asarray(x)
        y = np.asarray(y)
        out = self.exp[(self.dlog[x] + self.dlog[y]) % self.order]
        return self._ret(np.where((x == 0) | (y == 0), 0, out))

    def inv(self, x):
        if np.any(np.asarray(x) == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._ret(self.exp[(-self.dlog[x]) % self.order])

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def power(self, x: int, e: int) -> int:
        if x == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.dlog[x]) * e) % self.order])

    def scalar(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    @cached_property
    def squares(self) -> np.ndarray:
        """``squares[y] = y*y`` by direct multiplication (no use of ``phi``)."""
        y = np.arange(self.q, dtype=np.int64)
        return np.asarray(self.mul(y, y))

    @cached_property
    def sqrt_count(self) -> np.ndarray:
        """Number of square roots of each element, counted by squaring every element."""
        return np.bincount(self.squares, minlength=self.q)

    @cached_property
    def minus_one(self) -> int:
        return self.neg(1)

    # -- characters ---------------------------------------------------------

    def char_eval(self, j: int, x: int) -> complex:
        """chi_j(x); zero at x = 0 for every character."""
        x = int(x)
        if x == 0:
            return 0j
        k = int(self.dlog[x])
        return complex(np.exp(2j * np.pi * ((j * k) % self.order) / self.order))

    def char_minus_one(self, j) -> np.ndarray | int:
        """chi_j(-1) = (-1)**j, exact."""
        return 1 - 2 * (np.asarray(j) % 2) if np.ndim(j) else (-1) ** (int(j) % 2)

    @property
    def quadratic_index(self) -> int:
        return self.order // 2

    def conj_index(self, j):
        return (-np.asarray(j)) % self.order if np.ndim(j) else (-int(j)) % self.order

    @cached_property
    def gauss(self) -> "GaussSumTable":
        return gauss_sums(self)

    def __repr__(self) -> str:
        return f"FieldTable(p={self.p}, r={self.r}, q={self.q}, g={self.generator}, modulus={self.modulus})"


def _mul_matrix(c_poly: list[int], modulus: list[int], p: int, r: int) -> np.ndarray:
    """Matrix M with digits(x * c) = digits(x) @ M mod p."""
    rows = []
    for i in range(r):
        basis = [0] * i + [1]
        prod = _poly_mulmod(basis, c_poly, modulus, p)
        rows.append(prod + [0] * (r - len(prod)))
    return np.array(rows, dtype=np.int64)


def _element_order_is_full(c_poly: list[int], modulus: list[int], p: int, n: int) -> bool:
    for ell in prime_factors(n):
        if _poly_powmod(c_poly, n // ell, modulus, p) == [1]:
            return False
    return True


def build_field(p: int, r: int = 1, *, cap: int = FIELD_CAP, min_char: int = 5) -> FieldTable:
    """Tabulate F_{p^r}.

    The generator is the smallest integer code with multiplicative order q-1.
    ``min_char`` may be lowered to 3 for brute-force work outside the
    hypergeometric setting.
    """
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FieldError(f"p={p} is not prime")
    if p < min_char:
        raise FieldError(f"characteristic {p} < {min_char} is not supported")
    if r < 1:
        raise FieldError("extension degree must be >= 1")
    q = p**r
    if q > cap:
        raise CapExceeded(f"q = {p}^{r} = {q} exceeds the field cap {cap}")
    n = q - 1

    modulus = smallest_irreducible(p, r)
    if not is_irreducible(modulus, p):
        raise AssertionError("modulus search returned a reducible polynomial")

    powers = p ** np.arange(r, dtype=np.int64)
    all_digits = (np.arange(q, dtype=np.int64)[:, None] // powers) % p

    # least primitive element in integer order
    gen = None
    for code in range(1, q):
        c_poly = _trim([int(d) for d in all_digits[code]])
        if _element_order_is_full(c_poly, modulus, p, n) and (n == 1 or c_poly != [1]):
            gen = code
            break
    if gen is None:
        raise AssertionError(f"no generator found for F_{q}")

    # exp table by blockwise doubling: exp[m:2m] = exp[:m] * g^m
    g_poly = _trim([int(d) for d in all_digits[gen]])
    exp_digits = np.zeros((n, r), dtype=np.int64)
    exp_digits[0, 0] = 1
    filled = 1
    while filled < n:
        step = min(filled, n - filled)
        gm = _poly_powmod(g_poly, filled, modulus, p)
        M = _mul_matrix(gm, modulus, p, r)
        exp_digits[filled:filled + step] = (exp_digits[:step] @ M) % p
        filled += step
    exp = exp_digits @ powers
    dlog = np.full(q, -1, dtype=np.int64)
    dlog[exp] = np.arange(n, dtype=np.int64)
    if np.any(dlog[1:] < 0):
        raise AssertionError("generator does not enumerate the multiplicative group")

    # absolute trace: F_p-linear, determined by Tr(t^i)
    basis_traces = []
    for i in range(r):
        basis = [0] * i + [1]
        acc: list[int] = []
        frob = _poly_mod(basis, modulus, p)
        for _ in range(r):
            acc = _trim([((acc[k] if k < len(acc) else 0) + (frob[k] if k < len(frob) else 0)) % p
                         for k in range(max(len(acc), len(frob)))])
            frob = _poly_powmod(frob, p, modulus, p)
        if len(acc) > 1:
            raise AssertionError("trace landed outside the prime field")
        basis_traces.append(acc[0] if acc else 0)
    abs_trace = (all_digits @ np.array(basis_traces, dtype=np.int64)) % p

    phi = np.zeros(q, dtype=np.int64)
    phi[1:] = 1 - 2 * (dlog[1:] % 2)

    for arr in (exp, dlog, abs_trace, phi, all_digits):
        arr.setflags(write=False)
    return FieldTable(
        p=int(p), r=int(r), q=int(q), modulus=tuple(modulus), generator=int(gen),
        exp=exp, dlog=dlog, abs_trace=abs_trace, phi=phi, digits=all_digits,
    )


_FIELD_CACHE: dict[tuple[int, int, int], FieldTable] = {}


def get_field(p: int, r: int = 1, *, min_char: int = 5) -> FieldTable:
    """Memoized :func:`build_field` with the default cap."""
    key = (p, r, min_char)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = build_field(p, r, min_char=min_char)
    return _FIELD_CACHE[key]


def field_for_q(q: int, *, min_char: int = 5) -> FieldTable:
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, r), = f.items()
    return get_field(p, r, min_char=min_char)


# ---------------------------------------------------------------------------
# Gauss and Jacobi sums
# ---------------------------------------------------------------------------

NAIVE_DFT_THRESHOLD = 512


@dataclass(frozen=True, eq=False)
class GaussSumTable:
    """``values[j] = sum_x chi_j(x) psi(x)`` with psi(x) = exp(2 pi i Tr(x)/p)."""

    values: np.ndarray = field(repr=False)

    def __getitem__(self, j):
        return self.values[j]


def additive_character_sequence(F: FieldTable) -> np.ndarray:
    """k -> psi(g^k) for k = 0..q-2."""
    return np.exp(2j * np.pi * F.abs_trace[F.exp] / F.p)


def _dft_naive(seq: np.ndarray) -> np.ndarray:
    n = len(seq)
    k = np.arange(n)
    W = np.exp(2j * np.pi * (np.outer(k, k) % n) / n)
    return W @ seq


def _dft_fast(seq: np.ndarray) -> np.ndarray:
    return len(seq) * np.fft.ifft(seq)


def gauss_sums(F: FieldTable, method: str = "auto") -> GaussSumTable:
    """All q-1 Gauss sums as the length-(q-1) DFT of k -> psi(g^k)."""
    seq = additive_character_sequence(F)
    if method == "auto":
        method = "naive" if len(seq) <= NAIVE_DFT_THRESHOLD else "fft"
    if method == "naive":
        vals = _dft_naive(seq)
    elif method == "fft":
        vals = _dft_fast(seq)
    else:
        raise ValueError(f"unknown DFT method {method!r}")
    vals.setflags(write=False)
    return GaussSumTable(vals)


def jacobi_sum_direct(F: FieldTable, a: int, b: int) -> complex:
    """J(chi_a, chi_b) = sum_x chi_a(x) chi_b(1 - x), O(q)."""
    x = np.arange(2, F.q, dtype=np.int64) if F.r == 1 else np.setdiff1d(np.arange(F.q), [0, 1])
    y = F.sub(1, x)
    ka = F.dlog[x]
    kb = F.dlog[y]
    n = F.order
    return complex(np.sum(np.exp(2j * np.pi * ((a * ka + b * kb) % n) / n)))


def jacobi_sums(F: FieldTable, a, b) -> np.ndarray:
    """Vectorized J(chi_a, chi_b) through Gauss sums, with the degenerate cases exact."""
    n = F.order
    a = np.asarray(a) % n
    b = np.asarray(b) % n
    g = F.gauss.values
    ab = (a + b) % n
    with np.errstate(divide="ignore", invalid="ignore"):
        generic = g[a] * g[b] / g[ab]
    out = np.where(ab == 0, -np.asarray(F.char_minus_one(a), dtype=complex), generic)
    out = np.where((a == 0) ^ (b == 0), -1.0 + 0j, out)
    out = np.where((a == 0) & (b == 0), complex(F.q - 2), out)
    return out


def jacobi_sum(F: FieldTable, a: int, b: int) -> complex:
    return complex(jacobi_sums(F, a, b))


def binomial_norm(F: FieldTable, a, b) -> np.ndarray | complex:
    """Greene's normalized binomial (A over B) = B(-1)/q * J(A, conj B)."""
    out = F.char_minus_one(b) * jacobi_sums(F, a, F.conj_index(b)) / F.q
    return complex(out) if np.ndim(out) == 0 else out


def jacobi_table_direct(F: FieldTable) -> np.ndarray:
    """J[a, b] = sum_x chi_a(x) chi_b(1 - x) for all character pairs, by explicit summation."""
    x = np.setdiff1d(np.arange(F.q), [0, 1])
    n = F.order
    j = np.arange(n)
    A = np.exp(2j * np.pi * (np.outer(j, F.dlog[x]) % n) / n)
    B = np.exp(2j * np.pi * (np.outer(j, F.dlog[F.sub(1, x)]) % n) / n)
    return A @ B.T
