"""Small integer helpers: primality, factoring, Legendre/Kronecker symbols, divisors."""

from __future__ import annotations

from math import isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(factorint(n))


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, r) with q = p**r, or None."""
    f = factorint(q)
    if len(f) != 1:
        return None
    (p, r), = f.items()
    return p, r


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] by a sieve."""
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, hi + 1, i)))
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]


def prime_powers_between(lo: int, hi: int, min_p: int = 5) -> list[int]:
    out = []
    for p in primes_between(min_p, hi):
        q = p
        while q <= hi:
            if q >= lo:
                out.append(q)
            q *= p
    return sorted(out)


def legendre_symbol(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker_minus4(n: int) -> int:
    """chi_{-4}(n): 0 for even n, (-1)^((n-1)/2) for odd n."""
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def catalan(n: int) -> int:
    from math import comb
    return comb(2 * n, n) // (n + 1)
