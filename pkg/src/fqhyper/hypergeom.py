"""Greene's nFn-1 over F_q, and the scaled integer values of the 2F1 / 3F2 families.

``q * 2F1(lam)`` and ``q^2 * 3F2(mu)`` are integers off a couple of points; they
are obtained from Legendre / Clausen traces and cross-checked against the
defining character sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .config import ROUNDING_RESIDUAL
from .curves import clausen_trace, clausen_traces_all, legendre_trace, legendre_traces_all
from .field import FieldTable, binomial_norm

FAMILIES = ("f21", "f32")


@dataclass(frozen=True)
class ScaledHyperValue:
    """q^(n-1) * nFn-1(lam) rounded to an integer.

    ``raw`` keeps the unrounded complex value whenever ``exact`` is False.
    """

    lam: int
    n: int
    scaled: int
    residual: float
    exact: bool = True
    raw: complex | None = None


def _rounded(lam: int, n: int, value: complex) -> ScaledHyperValue:
    k = int(round(value.real))
    residual = abs(value - k)
    exact = residual < ROUNDING_RESIDUAL
    return ScaledHyperValue(lam, n, k, float(residual), exact, None if exact else complex(value))


# ---------------------------------------------------------------------------
# the defining character sum
# ---------------------------------------------------------------------------

def _check_params(upper: Sequence[int], lower: Sequence[int]) -> None:
    if len(upper) != len(lower) + 1 or len(upper) < 2:
        raise ValueError("need len(upper) == len(lower) + 1 >= 2")


def greene_coefficients(F: FieldTable, upper: Sequence[int], lower: Sequence[int]) -> np.ndarray:
    """c_j = prod_i (A_i chi_j over B_i chi_j) with B_0 the trivial character."""
    _check_params(upper, lower)
    j = np.arange(F.order)
    c = np.ones(F.order, dtype=complex)
    for a, b in zip(upper, (0, *lower)):
        c *= binomial_norm(F, (a + j) % F.order, (b + j) % F.order)
    return c


def greene_nfn1(F: FieldTable, upper: Sequence[int], lower: Sequence[int], x: int) -> complex:
    """q/(q-1) * sum_chi (A_1 chi over chi)(A_2 chi over B_1 chi)... chi(x)."""
    c = greene_coefficients(F, upper, lower)
    if x == 0:
        return 0j
    k = int(F.dlog[x])
    j = np.arange(F.order)
    chi_x = np.exp(2j * np.pi * ((j * k) % F.order) / F.order)
    return complex(F.q / F.order * np.dot(c, chi_x))


def greene_all(F: FieldTable, upper: Sequence[int], lower: Sequence[int]) -> np.ndarray:
    """nFn-1 at every element (indexed by element); one DFT over the characters."""
    c = greene_coefficients(F, upper, lower)
    out = np.zeros(F.q, dtype=complex)
    out[F.exp] = F.q * np.fft.ifft(c)
    return out


def phi_params(F: FieldTable, n: int) -> tuple[list[int], list[int]]:
    """All-phi upper and all-epsilon lower parameters for nFn-1."""
    return [F.quadratic_index] * n, [0] * (n - 1)


def f21_greene(F: FieldTable, lam: int) -> complex:
    return greene_nfn1(F, *phi_params(F, 2), lam)


def f32_greene(F: FieldTable, mu: int) -> complex:
    return greene_nfn1(F, *phi_params(F, 3), mu)


# ---------------------------------------------------------------------------
# fast scaled values through point counts
# ---------------------------------------------------------------------------

def f21_scaled(F: FieldTable, lam: int) -> ScaledHyperValue:
    """q * 2F1(lam) = -phi(-1) a_lam^Leg(q).

    At lam = 0 the value is 0.  At lam = 1 the character sum collapses to
    -phi(-1), which is 1 exactly when q = 3 mod 4.
    """
    sign = -int(F.phi[F.minus_one])
    if lam == 0:
        return ScaledHyperValue(0, 2, 0, 0.0)
    if lam == 1:
        return ScaledHyperValue(1, 2, sign, 0.0)
    a = legendre_trace(F, lam).trace
    return ScaledHyperValue(lam, 2, sign * a, 0.0)


def clausen_parameter(F: FieldTable, mu):
    """lam = mu / (1 - mu), the Clausen parameter with lam/(lam+1) = mu."""
    return F.div(mu, F.sub(1, mu))


def f32_scaled(F: FieldTable, mu: int) -> ScaledHyperValue:
    """q^2 * 3F2(mu) = phi(lam + 1) (a_lam^Cl(q)^2 - q) with lam = mu/(1-mu).

    mu = 1 is outside the image of lam -> lam/(lam+1); it is evaluated by the
    character sum and rounded.
    """
    if mu == 0:
        return ScaledHyperValue(0, 3, 0, 0.0)
    if mu == 1:
        return _rounded(1, 3, F.q**2 * f32_greene(F, 1))
    lam = clausen_parameter(F, mu)
    a = clausen_trace(F, lam).trace
    sign = int(F.phi[F.sub(1, mu)])  # phi(lam + 1) = phi(1/(1 - mu))
    return ScaledHyperValue(mu, 3, sign * (a * a - F.q), 0.0)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def canonical_order(F: FieldTable) -> np.ndarray:
    """0 first, then g^0, g^1, ..., g^(q-2)."""
    return np.concatenate([[0], F.exp]).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Sweep:
    """Scaled values over every lam, in canonical order."""

    F: FieldTable
    family: str
    lambdas: np.ndarray
    scaled: np.ndarray
    residual: np.ndarray

    @property
    def n(self) -> int:
        return 2 if self.family == "f21" else 3

    def __len__(self) -> int:
        return len(self.lambdas)

    def __getitem__(self, i: int) -> ScaledHyperValue:
        res = float(self.residual[i])
        return ScaledHyperValue(int(self.lambdas[i]), self.n, int(self.scaled[i]), res,
                                res < ROUNDING_RESIDUAL)

    def __iter__(self) -> Iterator[ScaledHyperValue]:
        return (self[i] for i in range(len(self)))

    def by_element(self) -> np.ndarray:
        out = np.empty(self.F.q, dtype=np.int64)
        out[self.lambdas] = self.scaled
        return out

    @property
    def max_residual(self) -> float:
        return float(self.residual.max()) if len(self.residual) else 0.0


def _f21_by_element(F: FieldTable, method: str) -> tuple[np.ndarray, np.ndarray]:
    if method == "greene":
        raw = F.q * greene_all(F, *phi_params(F, 2))
        vals = np.rint(raw.real).astype(np.int64)
        return vals, np.abs(raw - vals)
    a, res = legendre_traces_all(F, method)
    sign = -int(F.phi[F.minus_one])
    vals = sign * a
    vals[0], vals[1] = 0, sign
    res = res.copy()
    res[0] = res[1] = 0.0
    return vals, res


def _f32_by_element(F: FieldTable, method: str) -> tuple[np.ndarray, np.ndarray]:
    if method == "greene":
        raw = F.q**2 * greene_all(F, *phi_params(F, 3))
        vals = np.rint(raw.real).astype(np.int64)
        return vals, np.abs(raw - vals)
    a, res_a = clausen_traces_all(F, method)
    mu = np.arange(F.q, dtype=np.int64)
    mask = (mu != 0) & (mu != 1)
    m = mu[mask]
    one_minus = F.sub(1, m)
    lam = F.mul(m, F.inv(one_minus))
    vals = np.zeros(F.q, dtype=np.int64)
    al = a[lam]
    vals[mask] = F.phi[one_minus] * (al * al - F.q)
    res = np.zeros(F.q)
    # error in a propagates to a^2 roughly as 2|a| * err
    res[mask] = 2 * np.abs(al) * res_a[lam]
    one = f32_scaled(F, 1)
    vals[1], res[1] = one.scaled, one.residual
    return vals, res


def sweep(F: FieldTable, family: str, method: str = "fft") -> Sweep:
    """Scaled values for every lam in canonical order.

    ``method``: "fft" (additive-group correlation of character tables),
    "direct" (O(q) character sum per lam, vectorized in blocks) or "greene"
    (the defining character sum, one DFT over all characters).  All three give
    identical integers.
    """
    if family == "f21":
        vals, res = _f21_by_element(F, method)
    elif family == "f32":
        vals, res = _f32_by_element(F, method)
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    order = canonical_order(F)
    return Sweep(F, family, order, vals[order], res[order])
