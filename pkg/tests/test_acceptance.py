"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line (printed at the end of the run under
"acceptance criteria", and immediately with ``-s``).
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from fqhyper import config
from fqhyper.classnumbers import eichler_check, get_table, supersingular_count
from fqhyper.curves import legendre_trace
from fqhyper.field import build_field, field_for_q
from fqhyper.hypergeom import f21_scaled, f32_scaled, greene_all, greene_nfn1, phi_params, sweep
from fqhyper.identities import cusp_coeffs_2f1, deligne_normalized_ratios
from fqhyper.moments import (batman_density, batman_moment, empirical_moment, formula_rhs_f21,
                             integrate_density, ks_and_histogram, power_sum, BATMAN_BREAKS)
from fqhyper.numtheory import prime_powers_between, primes_between
from fqhyper.verify import (SCHOOF_FIELDS, SUPERSINGULAR_PRIMES, PASS, WARN, case4_report, class_sum_ratios,
                            largest_prime_below, moment_exact_mismatch, odd_moment_smallness, schoof_mismatches,
                            suite_rc, supersingular_mismatch)

P_CONVERGENCE = 20011
RNG_SEED = 20011


@pytest.fixture
def record(acceptance_log):
    def _record(n, ok, text, started):
        line = f"AC{n:02d} {'PASS' if ok else 'FAIL'} {text} [{time.perf_counter() - started:.1f}s]"
        acceptance_log.append(line)
        print(line)
        return ok
    return _record


@pytest.fixture(scope="module")
def big_sweeps():
    F = build_field(P_CONVERGENCE)
    return {fam: sweep(F, fam) for fam in ("f21", "f32")}


def _random_draws(count):
    rng = np.random.default_rng(RNG_SEED)
    qs = prime_powers_between(5, 2**14)
    draws = {}
    for _ in range(count):
        q = int(qs[rng.integers(len(qs))])
        draws.setdefault(q, []).append(int(rng.integers(q)))
    return draws


def _trace_identity(n_params, scaled_fn, exhaustive_check):
    """(failures, max residual) for exhaustive q <= 25 and 500 random (q, lambda), q <= 2^14."""
    worst, bad = 0.0, []
    for q in prime_powers_between(5, 25):
        F = field_for_q(q)
        raw = F.q ** (n_params - 1) * greene_all(F, *phi_params(F, n_params))
        for lam in range(q):
            want = exhaustive_check(F, lam)
            res = abs(raw[lam] - want)
            worst = max(worst, res)
            if res >= config.ROUNDING_RESIDUAL:
                bad.append((q, lam))
    for q, lams in _random_draws(500).items():
        F = field_for_q(q)
        for lam in lams:
            raw = F.q ** (n_params - 1) * greene_nfn1(F, *phi_params(F, n_params), lam)
            res = abs(raw - scaled_fn(F, lam))
            worst = max(worst, res)
            if res >= config.ROUNDING_RESIDUAL:
                bad.append((q, lam))
    return bad, worst


def _f21_from_trace(F, lam):
    if lam in (0, 1):
        return f21_scaled(F, lam).scaled
    return -int(F.phi[F.minus_one]) * legendre_trace(F, lam).trace


def test_ac01_trace_identity_2f1(record):
    t = time.perf_counter()
    bad, worst = _trace_identity(2, _f21_from_trace, _f21_from_trace)
    assert record(1, not bad, f"q 2F1 = -phi(-1) a_Leg: all lambda for 5 <= q <= 25 and 500 random (q, lambda), "
                  f"q <= 2^14; max residual {worst:.2e}", t)


def test_ac02_trace_identity_3f2(record):
    t = time.perf_counter()
    exact = lambda F, mu: f32_scaled(F, mu).scaled  # noqa: E731
    bad, worst = _trace_identity(3, exact, exact)
    seed = f32_scaled(build_field(7), 4).scaled
    assert record(2, not bad and seed == 9, f"q^2 3F2 = phi(lam+1)(a_Cl^2 - q): same regime; q=7, mu=4 -> {seed}; "
                  f"max residual {worst:.2e}", t)


def test_ac03_even_moments_exact(record):
    t = time.perf_counter()
    bad = next((b for q in primes_between(5, 199) if (b := moment_exact_mismatch(q, (2, 4)))), None)
    pins = {(7, 2): 33, (5, 2): 13}
    pin_ok = all(power_sum(sweep(build_field(q), "f21").scaled, m) == v == formula_rhs_f21(q, m).value
                 for (q, m), v in pins.items())
    assert record(3, bad is None and pin_ok, "sum scaled^m = 1 + 3 sum H*((4q-s^2)/4) s^m, primes 5..199, m in {2,4}; "
                  "(7,2) -> 33 = 33, (5,2) -> 13 = 13" + ("" if bad is None else f"; {bad}"), t)


def test_ac04_odd_moments_q_3_mod_4(record):
    t = time.perf_counter()
    bad = [(q, m) for q in primes_between(5, 199) if q % 4 == 3
           for m in (1, 3, 5) if power_sum(sweep(build_field(q), "f21").scaled, m) != 1]
    pin = power_sum(sweep(build_field(7), "f21").scaled, 1)
    assert record(4, not bad and pin == 1, f"sum scaled^m = 1 for primes q = 3 mod 4 up to 199, m in {{1,3,5}}; "
                  f"q=7, m=1 -> {pin}", t)


def test_ac05_schoof_against_census(record):
    t = time.perf_counter()
    bad = [b for q in SCHOOF_FIELDS if (b := schoof_mismatches(q)[0])]
    bad += [b for p in SUPERSINGULAR_PRIMES if (b := supersingular_mismatch(p))]
    S = [supersingular_count(p) for p in (5, 11, 13)]
    assert record(5, not bad and S == [1, 2, 1], f"schoof_count(q,s,2) = census for all even s, "
                  f"q in {SCHOOF_FIELDS}; |I(2p,p^2)| = 2 S(p) for p in {SUPERSINGULAR_PRIMES}; "
                  f"S(5,11,13) = {tuple(S)}", t)


def test_ac06_eichler(record):
    t = time.perf_counter()
    table = get_table(2000)
    bad = [N for N in range(1, 2001, 2) if (lambda r: r[0] != r[1])(eichler_check(N, table))]
    pins = eichler_check(5, table) == (1, 1) and eichler_check(9, table) == (Fraction(11, 6),) * 2
    assert record(6, not bad and pins, "sum H*(N - s^2) = -lambda_1(N) + sigma_1(N)/3 for all odd N <= 2000; "
                  "N=5 -> 1, N=9 -> 11/6", t)
    assert time.perf_counter() - t < 10


def test_ac07_combinatorial_identities(record):
    t = time.perf_counter()
    wanted = {"pab_alternate", "comb_lemma", "comb_lemma2_part1", "comb_lemma2_part2", "prop_poly",
              "cohen_vanishing", "pinned_values"}
    checks = [c for c in suite_rc() if c.name in wanted]
    ok = len(checks) == len(wanted) and all(c.status == PASS for c in checks)
    assert record(7, ok, "pab vs alternate (a <= 8), comb_lemma (nu <= 6, j <= 2nu+1), comb_lemma2 (1),(2) "
                  "(nu <= 6), prop_poly (nu <= 4, u,v <= 6), cohen (n <= 10): exact; comb_lemma(1,0) = 16 = 16", t)


def test_ac08_moment_convergence(record, big_sweeps):
    t = time.perf_counter()
    targets = {("f21", 2): 1, ("f21", 4): 2, ("f32", 2): 1, ("f32", 4): 3}
    parts, ok = [], True
    for (fam, m), ref in targets.items():
        val = empirical_moment(big_sweeps[fam], m)[1]
        tol = config.MOMENT_TOL[(fam, m)]
        ok &= abs(val - ref) <= tol
        parts.append(f"{fam} m={m}: {val:.5f} (ref {ref}, tol {tol})")
    assert record(8, ok, f"p={P_CONVERGENCE}: " + "; ".join(parts), t)
    assert time.perf_counter() - t < 300


def test_ac09_distribution_convergence(record, big_sweeps):
    t = time.perf_counter()
    ks = {fam: ks_and_histogram(big_sweeps[fam], 80).ks_statistic for fam in ("f21", "f32")}
    ok = all(ks[fam] < config.KS_TOL[fam] for fam in ks)
    assert record(9, ok, f"p={P_CONVERGENCE}: KS(2F1, semicircle) = {ks['f21']:.4f} < {config.KS_TOL['f21']}, "
                  f"KS(3F2, Batman) = {ks['f32']:.4f} < {config.KS_TOL['f32']}", t)


def test_ac10_batman_moments(record):
    t = time.perf_counter()
    exact = [batman_moment(m).exact_over_4pi for m in (2, 4, 6)]
    worst = max(batman_moment(m).rel_error for m in range(0, 13, 2))
    norm = integrate_density(batman_density, BATMAN_BREAKS)
    ok = (exact == [1, 3, 15] and worst < config.BATMAN_MOMENT_RTOL
          and abs(norm - 1) < config.BATMAN_NORM_ATOL)
    assert record(10, ok, f"moments m=2,4,6 -> {exact} x 4 pi; max relative quadrature error {worst:.1e} "
                  f"(m <= 12); normalization error {abs(norm - 1):.1e}", t)


def test_ac11_class_sum_asymptotics(record):
    t = time.perf_counter()
    q = largest_prime_below(100_000)
    get_table(4 * q)
    built = time.perf_counter() - t
    rows = class_sum_ratios(q)
    ok = all(abs(a - 1) <= config.CLASS_SUM_RTOL and abs(b - 1) <= config.CLASS_SUM_RTOL for _, a, b in rows)
    desc = ", ".join(f"n={n}: {a:.4f} / {b:.4f}" for n, a, b in rows)
    assert record(11, ok, f"q={q}, ratio to Cat_n (Legendre) / (4/3)Cat_n (Clausen): {desc}; "
                  f"table build {built:.1f}s", t)
    assert built < 60 and time.perf_counter() - t - built < 30


ODD_BOUND_REASON = ("|sum scaled^3| exceeds q^2 for most primes q = 1 mod 4 (first at q=13: 185 > 169); "
                    "the ratio stays below 2 up to 20011")


@pytest.fixture(scope="module")
def odd_size():
    return odd_moment_smallness(P_CONVERGENCE)


@pytest.mark.xfail(strict=True, reason=ODD_BOUND_REASON)
def test_ac12_odd_moments_and_cusp_growth(record, odd_size):
    t = time.perf_counter()
    c = cusp_coeffs_2f1(4096, 0, get_table(4096))
    ratios = deligne_normalized_ratios(c, 0)
    deligne_ok = max(ratios) <= float(c[1])
    reports = {q: case4_report(q) for q in (5, 13, 17, 25, 49)}
    decomp_ok = all(r[1] is None for r in reports.values())
    printed_odd_r = all(r[0] is None for q, r in reports.items() if q in (5, 13, 17))
    total5 = power_sum(sweep(build_field(5), "f21").scaled, 1)
    printed5 = formula_rhs_f21(5, 1).value
    warn = (f"{WARN} case (4) q=5, m=1: sum {total5} vs printed {printed5} with q 2F1(1) = -phi(-1); "
            f"{total5 + 2} vs {printed5} with q 2F1(1) = 1")
    small = not any(odd_size.exceeding.values())
    ok = small and deligne_ok and decomp_ok and printed_odd_r
    assert record(12, ok, f"|sum scaled^m| <= q^((m+1)/2), q = 1 mod 4 prime <= {P_CONVERGENCE}, m in {{1,3}}: "
                  f"{odd_size.line()}; |c(n)| <= c(1) d(n) n on windows to 4096 (max ratio {max(ratios):.5f}); "
                  f"odd-moment decomposition exact; {warn}", t)


def test_odd_moments_within_twice_the_bound(odd_size):
    assert odd_size.worst[1][0] <= 1
    assert odd_size.worst[3][0] < 2
