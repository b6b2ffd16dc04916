"""Power moments of the 2F1 / 3F2 sweeps, class-number formulas for them, and
the limiting semicircle and Batman laws.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .classnumbers import ClassNumberTable, get_table, supersingular_count
from .config import CDF_GRID_POINTS
from .curves import CurveCensus, hasse_bound
from .hypergeom import Sweep
from .numtheory import catalan, prime_power


def _frac_str(x: Fraction | None) -> str | None:
    return None if x is None else f"{x.numerator}/{x.denominator}"


def o3_moment(m: int) -> int:
    """sum_i (-1)^i C(m, i) Cat_i; the m-th moment of the trace on O(3)."""
    return sum((-1) ** i * math.comb(m, i) * catalan(i) for i in range(m + 1))


def reference_moment(family: str, m: int) -> Fraction:
    if m % 2:
        return Fraction(0)
    return Fraction(catalan(m // 2) if family == "f21" else o3_moment(m))


# ---------------------------------------------------------------------------
# empirical moments
# ---------------------------------------------------------------------------

def power_sum(values: np.ndarray, m: int) -> int:
    """Exact sum of values^m (Python integers, no overflow)."""
    vals, counts = np.unique(np.asarray(values, dtype=np.int64), return_counts=True)
    return sum(int(v) ** m * int(c) for v, c in zip(vals.tolist(), counts.tolist()))


def normalization_exponent(family: str, m: int) -> Fraction:
    """e with normalized moment = sum scaled^m / q^e."""
    return Fraction(m, 2) + 1 if family == "f21" else Fraction(m + 1)


def empirical_moment(sweep: Sweep, m: int) -> tuple[int, float, Fraction | None]:
    """(sum scaled^m, normalized float, normalized exact or None when irrational)."""
    q = sweep.F.q
    total = power_sum(sweep.scaled, m)
    e = normalization_exponent(sweep.family, m)
    if e.denominator == 1:
        exact = Fraction(total, q ** int(e))
        return total, float(exact), exact
    return total, total / q ** float(e), None


# ---------------------------------------------------------------------------
# class-number side
# ---------------------------------------------------------------------------

def weighted_class_sum(q: int, m: int, modulus: int, divisor: int,
                       table: ClassNumberTable | None = None, coprime: bool = True,
                       residue: int | None = None) -> Fraction:
    """sum over s = q+1 (mod modulus), |s| <= 2 sqrt(q) of H*((4q - s^2)/divisor) s^m.

    Terms with a non-integral argument vanish.  ``residue`` overrides q + 1.
    """
    p = prime_power(q)[0]
    table = table if table is not None else get_table(4 * q)
    B = hasse_bound(q)
    s = np.arange(-B, B + 1, dtype=np.int64)
    target = (q + 1) if residue is None else residue
    keep = (s - target) % modulus == 0
    if coprime:
        keep &= s % p != 0
    s = s[keep]
    num = 4 * q - s * s
    s = s[num % divisor == 0]
    h12 = table.hstar_array((4 * q - s * s) // divisor)
    total = sum(int(h) * int(v) ** m for h, v in zip(h12.tolist(), s.tolist()) if h)
    return Fraction(total, 12)


def moment_case(q: int, m: int) -> int:
    """Which of the four class-number formulas governs q^m sum 2F1^m."""
    r = prime_power(q)[1]
    if m % 2 == 0:
        return 1 if r % 2 else 2
    return 3 if q % 4 == 3 else 4


@dataclass(frozen=True)
class FormulaValue:
    """Right side of the 2F1 moment formula: ``value`` +- ``band``."""

    case: int
    value: Fraction
    band: float  # half-width due to the unknown C(q) or D(q) term; 0 when exact


def formula_rhs_f21(q: int, m: int, case: int | None = None,
                    table: ClassNumberTable | None = None) -> FormulaValue:
    """The printed class-number expression for q^m sum_lam 2F1(lam)^m.

    Cases (2) and (4) carry an unknown coefficient in [0, 6] resp. [-6, 6]
    times S(p) q^(m/2); ``value`` omits it and ``band`` bounds it.
    """
    pr = prime_power(q)
    if pr is None or pr[0] < 5:
        raise ValueError("q must be a power of a prime p >= 5")
    p, r = pr
    if case is None:
        case = moment_case(q, m)
    if case != moment_case(q, m):
        raise ValueError(f"case {case} does not apply to q={q}, m={m}")
    table = table if table is not None else get_table(4 * q)
    if case == 3:
        return FormulaValue(3, Fraction(1), 0.0)
    if case in (1, 2):
        val = 1 + 3 * weighted_class_sum(q, m, 4, 4, table)
    else:
        val = (-1 - 2 * weighted_class_sum(q, m, 8, 4, table)
               - 4 * weighted_class_sum(q, m, 16, 16, table))
    band = 0.0 if case == 1 else 6 * supersingular_count(p) * q ** (m / 2)
    return FormulaValue(case, val, band)


def legendre_odd_decomposition(q: int, m: int, n_plus: int, n_minus: int,
                               table: ClassNumberTable | None = None) -> Fraction:
    """-sum_{lam != 0, 1} a_lam^m for q = 1 mod 4 through class counts.

    Classes with full 2-torsion are weighted by their number of Legendre
    models: 4 when s = q+1 (mod 8) without (Z/4)^2, 6 with it, 2 otherwise,
    minus the classes with no Legendre model.  ``n_plus``/``n_minus`` are the
    numbers of lam with a_lam = +-2 sqrt(q) (zero unless q is a square).
    """
    if q % 4 != 1:
        raise ValueError("needs q = 1 mod 4")
    table = table if table is not None else get_table(4 * q)
    w = lambda mod, div, **kw: weighted_class_sum(q, m, mod, div, table, **kw)  # noqa: E731
    r = q + 1
    not8 = w(4, 4) - w(8, 4)
    val = (-4 * (w(8, 4) - w(8, 16)) - 2 * not8 - 6 * w(16, 16)
           + 2 * w(16, 16, residue=-r))
    root = math.isqrt(q)
    if root * root == q:
        val -= (n_plus - n_minus) * (2 * root) ** m
    return val


def lambda_one_term(q: int) -> int:
    """q 2F1(1) = -phi(-1)."""
    return -1 if q % 4 == 1 else 1


@dataclass(frozen=True)
class MomentReport:
    p: int
    r: int
    family: str
    m: int
    sum_scaled: int
    normalized: float
    exact: Fraction | None
    reference: Fraction
    formula_rhs: Fraction | None
    defect: Fraction | None
    band: float | None

    def as_dict(self) -> dict:
        return {
            "p": self.p, "r": self.r, "family": self.family, "m": self.m,
            "sum_scaled": str(self.sum_scaled),
            "normalized": self.normalized,
            "reference": _frac_str(self.reference),
            "formula_rhs": _frac_str(self.formula_rhs),
            "defect": _frac_str(self.defect),
            "band": self.band,
        }

    def to_json(self, **extra) -> str:
        return json_object({**self.as_dict(), **extra})


def _json_token(v) -> str:
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError("non-finite float in a report")
        return format(v, ".17g")
    return json.dumps(v)


def json_object(d: dict) -> str:
    """One-line JSON with floats at 17 significant digits."""
    return "{" + ", ".join(f"{json.dumps(k)}: {_json_token(v)}" for k, v in d.items()) + "}"


def moment_report(sweep: Sweep, m: int, table: ClassNumberTable | None = None) -> MomentReport:
    F = sweep.F
    total, normalized, exact = empirical_moment(sweep, m)
    rhs = defect = band = None
    if sweep.family == "f21" and m >= 1:
        fv = formula_rhs_f21(F.q, m, table=table)
        rhs, band = fv.value, fv.band
        defect = Fraction(total) - rhs
    return MomentReport(F.p, F.r, sweep.family, m, total, normalized, exact,
                        reference_moment(sweep.family, m), rhs, defect, band)


# ---------------------------------------------------------------------------
# Clausen even moments against the census
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClausenCheck:
    q: int
    s: int
    n: int
    skipped: str | None
    lhs_plain: int = 0
    rhs_plain: Fraction = Fraction(0)
    lhs_twisted: int = 0
    rhs_twisted: Fraction = Fraction(0)
    L_size: int = 0
    L_bound: int = 0

    @property
    def ok(self) -> bool:
        return (self.skipped is None and self.lhs_plain == self.rhs_plain
                and self.lhs_twisted == self.rhs_twisted)

    @property
    def bound_ok(self) -> bool:
        return self.L_size <= self.L_bound


def clausen_even_moment_check(C: CurveCensus, s: int, n: int,
                              table: ClassNumberTable | None = None) -> ClausenCheck:
    """Compare sums over L(s, q) with s^2n (I/2 + I2) and s^2n (-I/2 + 2 I2)."""
    F = C.F
    q = F.q
    if s <= 0 or s % 2 or s * s > 4 * q:
        raise ValueError("s must be even with 0 < s <= 2 sqrt(q)")
    L = C.clausen_L(s)
    I, I2 = C.I(s), C.I2(s)
    table = table if table is not None else get_table(4 * q)
    H = table.H(4 * q - s * s)
    S = supersingular_count(F.p) if F.p >= 5 else 0
    bound = 3 * max(H, S, 2)
    third = F.inv(F.scalar(3))
    minus_ninth = F.neg(F.inv(F.scalar(9)))
    if third in L or minus_ninth in L:
        return ClausenCheck(q, s, n, "1/3 or -1/9 lies in L(s,q)", L_size=len(L), L_bound=bound)
    if any(c.j_invariant == F.scalar(1728) for c in I):
        return ClausenCheck(q, s, n, "a j=1728 class has trace +-s", L_size=len(L), L_bound=bound)
    traces = {lam: C.classes[C.clausen_class[lam]].trace for lam in L}
    lhs1 = sum(a ** (2 * n) for a in traces.values())
    lhs2 = sum(int(F.phi[F.neg(lam)]) * a ** (2 * n) for lam, a in traces.items())
    s2n = s ** (2 * n)
    rhs1 = s2n * (Fraction(len(I), 2) + len(I2))
    rhs2 = s2n * (Fraction(-len(I), 2) + 2 * len(I2))
    return ClausenCheck(q, s, n, None, lhs1, rhs1, lhs2, rhs2, len(L), bound)


# ---------------------------------------------------------------------------
# limiting densities
# ---------------------------------------------------------------------------

def semicircle_density(t):
    """(1/2pi) sqrt(4 - t^2) on [-2, 2]."""
    t = np.asarray(t, dtype=float)
    out = np.sqrt(np.clip(4 - t * t, 0, None)) / (2 * np.pi)
    return out if out.ndim else float(out)


def batman_f(t):
    """The unnormalized O(3) trace density on [-3, 3]; integrates to 4 pi."""
    t = np.asarray(t, dtype=float)
    a = np.abs(t)
    out = np.zeros_like(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        outer = (a > 1) & (a < 3)
        out[outer] = ((3 - a) / np.sqrt(3 + 2 * a - a * a))[outer]
        inner = a < 1
        ti = t[inner]
        out[inner] = (3 + ti) / np.sqrt(3 - 2 * ti - ti * ti) + (3 - ti) / np.sqrt(3 + 2 * ti - ti * ti)
        # one-sided limits at the singular abscissae
        out[a == 1] = np.inf
    out[a == 3] = 0.0
    return out if out.ndim else float(out)


def batman_density(t):
    """f(t) / (4 pi)."""
    v = np.asarray(batman_f(t)) / (4 * np.pi)
    return v if v.ndim else float(v)


BATMAN_BREAKS = (-3.0, -1.0, 0.0, 1.0, 3.0)
SEMICIRCLE_BREAKS = (-2.0, 2.0)


def integrate_density(f, breaks, m: int = 0) -> float:
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        # QAGS never evaluates the endpoints, where the integrand may blow up
        v, _ = integrate.quad(lambda t: t ** m * f(t), a, b, epsabs=1e-13, epsrel=1e-12, limit=400)
        total += v
    return total


@dataclass(frozen=True)
class BatmanMoment:
    m: int
    exact_over_4pi: int  # the moment is this integer times 4 pi
    series_over_4pi: Fraction  # 2F1(1/2, -m; 2; 4) by its terminating series
    quadrature: float

    @property
    def exact(self) -> float:
        return 4 * math.pi * self.exact_over_4pi

    @property
    def rel_error(self) -> float:
        if self.exact_over_4pi == 0:
            return abs(self.quadrature)
        return abs(self.quadrature - self.exact) / abs(self.exact)


def hyp2f1_terminating(a: Fraction, m: int, c: Fraction, z: Fraction) -> Fraction:
    """2F1(a, -m; c; z) for a nonnegative integer m."""
    term, total = Fraction(1), Fraction(1)
    for k in range(m):
        term *= (a + k) * (-m + k) * z / ((c + k) * (k + 1))
        total += term
    return total


def gauss_2f1_at_one(a: Fraction, b: Fraction, c: Fraction) -> float:
    """Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))."""
    g = math.gamma
    return g(c) * g(c - a - b) / (g(c - a) * g(c - b))


@lru_cache(maxsize=None)
def batman_moment(m: int) -> BatmanMoment:
    """int_{-3}^{3} t^m f(t) dt three ways: alternating Catalan sum, series, quadrature."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    exact = o3_moment(m) if m % 2 == 0 else 0
    half = Fraction(1, 2)
    series = hyp2f1_terminating(half, m, Fraction(2), Fraction(4)) if m % 2 == 0 else Fraction(0)
    quad = integrate_density(batman_f, BATMAN_BREAKS, m)
    return BatmanMoment(m, exact, series, quad)


def batman_prefactor() -> float:
    """16 * 2F1(1/2, -1/2; 3/2; 1); equals 4 pi."""
    h = Fraction(1, 2)
    return 16 * gauss_2f1_at_one(h, -h, Fraction(3, 2))


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReferenceCDF:
    grid: np.ndarray
    values: np.ndarray

    def __call__(self, x):
        return np.interp(x, self.grid, self.values, left=0.0, right=1.0)


@lru_cache(maxsize=None)
def reference_cdf(family: str, points: int = CDF_GRID_POINTS) -> ReferenceCDF:
    """CDF of the limiting law by cellwise adaptive quadrature on a uniform grid."""
    if family == "f21":
        lo, hi, f, singular = -2.0, 2.0, semicircle_density, ()
    elif family == "f32":
        lo, hi, f, singular = -3.0, 3.0, batman_density, (-1.0, 1.0)
    else:
        raise ValueError(f"unknown family {family!r}")
    grid = np.linspace(lo, hi, points)
    grid = np.union1d(grid, np.array(singular))
    cells = np.array([integrate.quad(f, a, b, limit=200)[0] for a, b in zip(grid[:-1], grid[1:])])
    cdf = np.concatenate([[0.0], np.cumsum(cells)])
    cdf /= cdf[-1]
    return ReferenceCDF(grid, np.maximum.accumulate(cdf))


def renormalized(sweep: Sweep) -> np.ndarray:
    """sqrt(q) 2F1 in [-2, 2] or q 3F2 in [-3, 3]."""
    q = sweep.F.q
    scale = math.sqrt(q) if sweep.family == "f21" else q
    return sweep.scaled.astype(float) / scale


def ks_statistic(x: np.ndarray, cdf) -> float:
    x = np.sort(np.asarray(x, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("empty sample")
    F = cdf(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


@dataclass(frozen=True, eq=False)
class EmpiricalHistogram:
    edges: np.ndarray
    counts: np.ndarray
    total: int
    density: np.ndarray
    reference_density: np.ndarray
    ks_statistic: float

    def to_csv(self) -> str:
        g = lambda v: format(float(v), ".17g")  # noqa: E731
        lines = ["bin_left,bin_right,count,density,reference_density"]
        for i in range(len(self.counts)):
            lines.append(",".join([g(self.edges[i]), g(self.edges[i + 1]), str(int(self.counts[i])),
                                   g(self.density[i]), g(self.reference_density[i])]))
        lines.append(f"# ks,{g(self.ks_statistic)}")
        return "\n".join(lines) + "\n"


def ks_and_histogram(sweep: Sweep, bins: int = 50) -> EmpiricalHistogram:
    if len(sweep) == 0:
        raise ValueError("empty sweep")
    if bins < 1:
        raise ValueError("bins must be positive")
    x = renormalized(sweep)
    half = 2.0 if sweep.family == "f21" else 3.0
    edges = np.linspace(-half, half, bins + 1)
    counts, _ = np.histogram(x, bins=edges)
    total = len(x)
    width = edges[1:] - edges[:-1]
    density = counts / (total * width)
    mids = (edges[:-1] + edges[1:]) / 2
    ref = semicircle_density(mids) if sweep.family == "f21" else batman_density(mids)
    ks = ks_statistic(x, reference_cdf(sweep.family))
    return EmpiricalHistogram(edges, counts, total, density, np.asarray(ref), ks)
