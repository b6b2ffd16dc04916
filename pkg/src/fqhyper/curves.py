"""Legendre and Clausen curves: traces of Frobenius, twists, torsion and a brute-force census.

Curves are handled in the form ``y^2 = x^3 + a2 x^2 + a4 x + a6``.

    Legendre  y^2 = x(x-1)(x-lam)     -> (a2, a4, a6) = (-(1+lam), lam, 0)
    Clausen   y^2 = (x-1)(x^2+lam)    -> (a2, a4, a6) = (-1, lam, -lam)
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from math import isqrt

import numpy as np

from .config import BRUTE_FORCE_CAP
from .field import CapExceeded, FieldTable


class SingularCurve(ValueError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    lam: int
    family: str
    trace: int
    j_invariant: int | None  # None marks a singular curve


# ---------------------------------------------------------------------------
# Weierstrass helpers
# ---------------------------------------------------------------------------

def legendre_coeffs(F: FieldTable, lam: int) -> tuple[int, int, int]:
    return F.neg(F.add(1, lam)), lam, 0


def clausen_coeffs(F: FieldTable, lam: int) -> tuple[int, int, int]:
    return F.minus_one, lam, F.neg(lam)


def cubic_values(F: FieldTable, a2, a4, a6, x=None) -> np.ndarray:
    """x^3 + a2 x^2 + a4 x + a6 for every x (or the given x array)."""
    if x is None:
        x = np.arange(F.q, dtype=np.int64)
    return F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6)


def discriminant(F: FieldTable, a2: int, a4: int, a6: int) -> int:
    """Discriminant of y^2 = x^3 + a2 x^2 + a4 x + a6 via the b-invariants."""
    s = F.scalar
    m = F.mul
    b2, b4, b6 = m(s(4), a2), m(s(2), a4), m(s(4), a6)
    b8 = F.sub(m(m(s(4), a2), a6), m(a4, a4))
    t1 = F.neg(m(m(b2, b2), b8))
    t2 = F.neg(m(s(8), m(m(b4, b4), b4)))
    t3 = F.neg(m(s(27), m(b6, b6)))
    t4 = m(s(9), m(m(b2, b4), b6))
    return F.add(F.add(t1, t2), F.add(t3, t4))


def j_invariant(F: FieldTable, a2: int, a4: int, a6: int) -> int | None:
    disc = discriminant(F, a2, a4, a6)
    if disc == 0:
        return None
    b2, b4 = F.mul(F.scalar(4), a2), F.mul(F.scalar(2), a4)
    c4 = F.sub(F.mul(b2, b2), F.mul(F.scalar(24), b4))
    return F.div(F.mul(F.mul(c4, c4), c4), disc)


def legendre_j(F: FieldTable, lam: int) -> int:
    """2^8 (lam^2 - lam + 1)^3 / (lam^2 (lam - 1)^2)."""
    num = F.add(F.sub(F.mul(lam, lam), lam), 1)
    num = F.mul(F.scalar(256), F.mul(F.mul(num, num), num))
    lm1 = F.sub(lam, 1)
    den = F.mul(F.mul(lam, lam), F.mul(lm1, lm1))
    return F.div(num, den)


def point_count(F: FieldTable, a2: int, a4: int, a6: int, d: int = 1) -> int:
    """|E(F_q)| for y^2 = d*(x^3 + a2 x^2 + a4 x + a6), counting square roots directly."""
    vals = cubic_values(F, a2, a4, a6)
    if d != 1:
        vals = F.mul(vals, d)
    return 1 + int(F.sqrt_count[vals].sum())


def cubic_root_count(F: FieldTable, a2: int, a4: int, a6: int) -> int:
    return int(np.count_nonzero(cubic_values(F, a2, a4, a6) == 0))


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------

def legendre_trace(F: FieldTable, lam: int) -> TraceRecord:
    """a = -sum_x phi(x(x-1)(x-lam)) in O(q)."""
    if lam in (0, 1):
        raise SingularCurve(f"Legendre curve is singular at lambda={lam}")
    x = np.arange(F.q, dtype=np.int64)
    vals = F.mul(F.mul(x, F.sub(x, 1)), F.sub(x, lam))
    a = -int(F.phi[vals].sum())
    return TraceRecord(lam, "legendre", a, legendre_j(F, lam))


def clausen_trace(F: FieldTable, lam: int) -> TraceRecord:
    """a = -sum_x phi((x-1)(x^2+lam)) in O(q)."""
    if lam == 0 or lam == F.minus_one:
        raise SingularCurve(f"Clausen curve is singular at lambda={lam}")
    x = np.arange(F.q, dtype=np.int64)
    vals = F.mul(F.sub(x, 1), F.add(F.squares, lam))
    a = -int(F.phi[vals].sum())
    return TraceRecord(lam, "clausen", a, j_invariant(F, *clausen_coeffs(F, lam)))


def additive_correlation(F: FieldTable, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """c[lam] = sum_t u[t] * v[t + lam] over the additive group (Z/p)^r, by FFT."""
    shape = (F.p,) * F.r
    U = np.fft.fftn(np.asarray(u, dtype=float).reshape(shape))
    V = np.fft.fftn(np.asarray(v, dtype=float).reshape(shape))
    return np.fft.ifftn(np.conj(U) * V).real.reshape(F.q)


def _chunks(q: int, r: int, budget: int = 1 << 22):
    step = max(1, budget // (q * r))
    for start in range(0, q, step):
        yield np.arange(start, min(q, start + step), dtype=np.int64)


def legendre_traces_all(F: FieldTable, method: str = "fft") -> tuple[np.ndarray, np.ndarray]:
    """Raw sums -sum_x phi(x(x-1)(x-lam)) for every lam (indexed by element).

    Returns (traces, residuals); entries at lam = 0, 1 are the same character
    sums but do not come from elliptic curves.
    """
    x = np.arange(F.q, dtype=np.int64)
    u = F.phi[F.mul(x, F.sub(x, 1))]
    if method == "fft":
        raw = -additive_correlation(F, F.phi, u)
        a = np.rint(raw).astype(np.int64)
        return a, np.abs(raw - a)
    if method == "direct":
        a = np.empty(F.q, dtype=np.int64)
        for lams in _chunks(F.q, F.r):
            shifted = F.sub(x[None, :], lams[:, None])
            a[lams] = -(F.phi[shifted] * u[None, :]).sum(axis=1)
        return a, np.zeros(F.q)
    raise ValueError(f"unknown method {method!r}")


def clausen_traces_all(F: FieldTable, method: str = "fft") -> tuple[np.ndarray, np.ndarray]:
    """Raw sums -sum_x phi((x-1)(x^2+lam)) for every lam (indexed by element)."""
    x = np.arange(F.q, dtype=np.int64)
    w_x = F.phi[F.sub(x, 1)]
    if method == "fft":
        w = np.bincount(F.squares, weights=w_x, minlength=F.q)
        raw = -additive_correlation(F, w, F.phi)
        a = np.rint(raw).astype(np.int64)
        return a, np.abs(raw - a)
    if method == "direct":
        a = np.empty(F.q, dtype=np.int64)
        sq = F.squares
        for lams in _chunks(F.q, F.r):
            shifted = F.add(sq[None, :], lams[:, None])
            a[lams] = -(F.phi[shifted] * w_x[None, :]).sum(axis=1)
        return a, np.zeros(F.q)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# twists and torsion
# ---------------------------------------------------------------------------

def twist_trace_check(F: FieldTable, coeffs: tuple[int, int, int], d: int) -> bool:
    """Check q+1-|E| = phi(d) (q+1-|E_d|) by counting both curves."""
    a2, a4, a6 = coeffs
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    if discriminant(F, a2, a4, a6) == 0:
        raise SingularCurve("cannot twist a singular cubic")
    a = F.q + 1 - point_count(F, a2, a4, a6)
    a_d = F.q + 1 - point_count(F, a2, a4, a6, d=d)
    return a == int(F.phi[d]) * a_d


def _points(F: FieldTable, a2: int, a4: int, a6: int) -> tuple[np.ndarray, np.ndarray]:
    """All affine points (xs, ys) of y^2 = cubic."""
    vals = cubic_values(F, a2, a4, a6)
    order = np.argsort(F.squares, kind="stable")
    sorted_sq = F.squares[order]
    start = np.searchsorted(sorted_sq, vals)
    cnt = F.sqrt_count[vals]
    xs = np.arange(F.q, dtype=np.int64)
    x1, y1 = xs[cnt >= 1], order[start[cnt >= 1]]
    two = cnt == 2
    x2, y2 = xs[two], order[start[two] + 1]
    return np.concatenate([x1, x2]), np.concatenate([y1, y2])


def four_torsion_size(F: FieldTable, a2: int, a4: int, a6: int) -> int:
    """#E(F_q)[4] by enumerating every point and doubling it twice."""
    xs, ys = _points(F, a2, a4, a6)
    two_torsion = int(np.count_nonzero(ys == 0))
    xs, ys = xs[ys != 0], ys[ys != 0]
    if len(xs) == 0:
        return 1 + two_torsion
    s = F.scalar
    slope_num = F.add(F.add(F.mul(s(3), F.mul(xs, xs)), F.mul(F.mul(s(2), a2), xs)), a4)
    slope = F.mul(slope_num, F.inv(F.mul(s(2), ys)))
    x3 = F.sub(F.sub(F.mul(slope, slope), a2), F.mul(s(2), xs))
    y3 = F.neg(F.add(ys, F.mul(slope, F.sub(x3, xs))))
    return 1 + two_torsion + int(np.count_nonzero(y3 == 0))


def torsion_flags(F: FieldTable, lam: int, brute_force: bool = False) -> tuple[bool, bool]:
    """(Z2xZ2 in E_lam(F_q), Z4xZ4 in E_lam(F_q)) for the Legendre curve.

    The 4-torsion flag uses the square criterion on lam and 1-lam when
    q = 1 mod 4 (and is False when q = 3 mod 4, since then F_q lacks a
    primitive 4th root of unity); ``brute_force`` enumerates the group instead.
    """
    if lam in (0, 1):
        raise SingularCurve(f"Legendre curve is singular at lambda={lam}")
    if brute_force:
        return True, four_torsion_size(F, *legendre_coeffs(F, lam)) == 16
    if F.q % 4 == 3:
        return True, False
    return True, bool(F.phi[lam] == 1 and F.phi[F.sub(1, lam)] == 1)


def k3_prediction(F: FieldTable, lam: int) -> int:
    """Predicted |X_lam(F_q)| = 1 + q^2 + 19q + q^2 * 3F2(-lam)."""
    from .hypergeom import f32_scaled

    if lam == 0 or lam == F.minus_one:
        raise SingularCurve(f"X_lambda is excluded at lambda={lam}")
    q = F.q
    return 1 + q * q + 19 * q + f32_scaled(F, F.neg(lam)).scaled


# ---------------------------------------------------------------------------
# census of isomorphism classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveClass:
    index: int
    coeffs: tuple[int, int, int]
    trace: int
    full_2_torsion: bool
    z4xz4: bool
    member_count: int
    j_invariant: int


@dataclass(eq=False)
class CurveCensus:
    """All F_q-isomorphism classes of elliptic curves over a small field.

    For p >= 5 curves are enumerated as y^2 = x^3 + A x + B and classes are the
    orbits of (A, B) -> (u^4 A, u^6 B).  In characteristic 3 the full family
    y^2 = x^3 + a2 x^2 + a4 x + a6 is enumerated with the substitutions
    x -> u^2 x + r, y -> u^3 y.
    """

    F: FieldTable
    classes: list[CurveClass]
    class_of: np.ndarray = field(repr=False)
    short_form: bool
    equations: int

    @property
    def q(self) -> int:
        return self.F.q

    def class_of_curve(self, a2: int, a4: int, a6: int) -> int:
        F = self.F
        if self.short_form:
            A, B = short_form(F, a2, a4, a6)
            return int(self.class_of[A * F.q + B])
        return int(self.class_of[(a2 * F.q + a4) * F.q + a6])

    def twist_class(self, idx: int) -> int:
        """Class of the quadratic twist by a non-square."""
        F = self.F
        a2, a4, a6 = self.classes[idx].coeffs
        d = int(F.exp[1])  # the generator is a non-square
        d2, d3 = F.mul(d, d), F.mul(F.mul(d, d), d)
        # y^2 = d f(x) is isomorphic to y^2 = x^3 + d a2 x^2 + d^2 a4 x + d^3 a6
        return self.class_of_curve(F.mul(d, a2), F.mul(d2, a4), F.mul(d3, a6))

    def I(self, s: int) -> list[CurveClass]:
        """Classes with |E(F_q)| = q + 1 -/+ s."""
        return [c for c in self.classes if abs(c.trace) == abs(s)]

    def I2(self, s: int) -> list[CurveClass]:
        return [c for c in self.I(s) if c.full_2_torsion]

    def count_with_trace(self, s: int, full_2_torsion: bool = True) -> int:
        return sum(1 for c in self.classes if c.trace == s and (c.full_2_torsion or not full_2_torsion))

    @cached_property
    def legendre_class(self) -> dict[int, int]:
        """lam -> class index for every lam not in {0, 1}."""
        F = self.F
        return {lam: self.class_of_curve(*legendre_coeffs(F, lam)) for lam in range(2, F.q)}

    def L(self, lam: int) -> list[int]:
        """All beta with E_beta isomorphic to E_lam over F_q."""
        target = self.legendre_class[lam]
        return [b for b, c in self.legendre_class.items() if c == target]

    @cached_property
    def legendre_multiplicity(self) -> dict[int, int]:
        counts: dict[int, int] = defaultdict(int)
        for c in self.legendre_class.values():
            counts[c] += 1
        return dict(counts)

    def inconvenient_classes(self) -> list[CurveClass]:
        """Classes with full 2-torsion that contain no Legendre curve."""
        with_leg = set(self.legendre_class.values())
        return [c for c in self.classes if c.full_2_torsion and c.index not in with_leg]

    @cached_property
    def clausen_class(self) -> dict[int, int]:
        F = self.F
        return {lam: self.class_of_curve(*clausen_coeffs(F, lam))
                for lam in range(F.q) if lam not in (0, F.minus_one)}

    def clausen_L(self, s: int) -> list[int]:
        """L(s, q): lam (not 0, -1) whose Clausen curve has trace +-s."""
        return [lam for lam, c in self.clausen_class.items() if abs(self.classes[c].trace) == abs(s)]


def short_form(F: FieldTable, a2: int, a4: int, a6: int) -> tuple[int, int]:
    """(A, B) of the curve after x -> x - a2/3 (characteristic >= 5)."""
    third = F.inv(F.scalar(3))
    A = F.sub(a4, F.mul(F.mul(a2, a2), third))
    B = F.add(F.sub(a6, F.mul(F.mul(a2, a4), third)),
              F.mul(F.mul(F.scalar(2), F.mul(F.mul(a2, a2), a2)), F.inv(F.scalar(27))))
    return A, B


def _class_record(F: FieldTable, idx: int, coeffs: tuple[int, int, int], members: int) -> CurveClass:
    a2, a4, a6 = coeffs
    n_points = point_count(F, a2, a4, a6)
    trace = F.q + 1 - n_points
    full2 = cubic_root_count(F, a2, a4, a6) == 3
    z44 = full2 and n_points % 16 == 0 and four_torsion_size(F, a2, a4, a6) == 16
    return CurveClass(idx, coeffs, trace, full2, z44, members, j_invariant(F, a2, a4, a6))


def census(F: FieldTable, cap: int = BRUTE_FORCE_CAP) -> CurveCensus:
    """Enumerate every nonsingular curve over F_q and group into isomorphism classes."""
    q = F.q
    if q > cap:
        raise CapExceeded(f"q={q} exceeds the brute-force cap {cap}")
    units = F.exp.astype(np.int64)
    u2 = F.mul(units, units)
    u4 = F.mul(u2, u2)
    u6 = F.mul(u4, u2)
    classes: list[CurveClass] = []

    if F.p >= 5:
        A = np.repeat(np.arange(q, dtype=np.int64), q)
        B = np.tile(np.arange(q, dtype=np.int64), q)
        disc = F.add(F.mul(F.scalar(4), F.mul(F.mul(A, A), A)), F.mul(F.scalar(27), F.mul(B, B)))
        class_of = np.where(disc == 0, -2, -1).astype(np.int64)
        for start in np.flatnonzero(class_of == -1):
            if class_of[start] != -1:
                continue
            a, b = divmod(int(start), q)
            orbit = np.unique(F.mul(u4, a) * q + F.mul(u6, b))
            idx = len(classes)
            class_of[orbit] = idx
            classes.append(_class_record(F, idx, (0, a, b), len(orbit)))
        class_of[class_of == -2] = -1
        return CurveCensus(F, classes, class_of, True, int(np.count_nonzero(disc)))

    # characteristic 3: full family with (u, r) substitutions
    n = q**3
    codes = np.arange(n, dtype=np.int64)
    a2s, rest = np.divmod(codes, q * q)
    a4s, a6s = np.divmod(rest, q)
    nonsing = np.array([discriminant(F, int(a), int(b), int(c)) != 0
                        for a, b, c in zip(a2s, a4s, a6s)])
    class_of = np.where(nonsing, -1, -2).astype(np.int64)
    uu = np.repeat(units, q)
    rr = np.tile(np.arange(q, dtype=np.int64), len(units))
    inv_u2 = F.inv(F.mul(uu, uu))
    inv_u4 = F.mul(inv_u2, inv_u2)
    inv_u6 = F.mul(inv_u4, inv_u2)
    s3, s2 = F.scalar(3), F.scalar(2)
    for start in np.flatnonzero(class_of == -1):
        if class_of[start] != -1:
            continue
        a2, a4, a6 = int(a2s[start]), int(a4s[start]), int(a6s[start])
        n2 = F.add(F.mul(s3, rr), a2)
        n4 = F.add(F.add(F.mul(s3, F.mul(rr, rr)), F.mul(F.mul(s2, a2), rr)), a4)
        n6 = F.add(F.add(F.add(F.mul(F.mul(rr, rr), rr), F.mul(a2, F.mul(rr, rr))), F.mul(a4, rr)), a6)
        orbit = np.unique((F.mul(n2, inv_u2) * q + F.mul(n4, inv_u4)) * q + F.mul(n6, inv_u6))
        idx = len(classes)
        class_of[orbit] = idx
        classes.append(_class_record(F, idx, (a2, a4, a6), len(orbit)))
    class_of[class_of == -2] = -1
    return CurveCensus(F, classes, class_of, False, int(np.count_nonzero(nonsing)))


def hasse_bound(q: int) -> int:
    """floor(2 sqrt(q))."""
    return isqrt(4 * q)
