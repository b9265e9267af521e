"""Acceptance criteria, each at its stated tolerance and time budget.

Every check records a line in ``RESULTS``; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the session. Run directly with
``python tests/test_acceptance.py`` for the same summary.
"""

import math
import random
import time
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

import oracles
from subshift_gibbs.generators import (
    BFreeSpec,
    SturmianSpec,
    behrend_check,
    eta_array,
    parse_family,
    primes_upto,
    sturmian_array,
    taut_check,
)
from subshift_gibbs.measures import (
    BlockDistribution,
    D_nu_series,
    atom_bound_series,
    bernoulli_series,
    convolve_half,
    convolve_series,
    d_nu,
    empirical_series,
    entropy_gibbs_bound_check,
    gibbs_lower_bound_check,
    gibbs_ratio_series,
    monotonicity_check,
    periodic_series,
    rate_of_convergence_check,
)
from subshift_gibbs.spectral import (
    entropy_density_bound_check,
    max_mean_cycle,
    ones_density_series,
    pf_eigenvalue,
    primitivity_check,
    topological_entropy_exact,
)
from subshift_gibbs.subshifts import (
    EmptySubshiftError,
    ForbiddenSet,
    SubshiftSpec,
    hereditary_closure_graph,
    language,
    random_walk,
    sft_to_graph,
    upgrade_embedding,
)
from subshift_gibbs.words import dominates

RESULTS = defaultdict(list)  # criterion -> [(label, ok, detail, seconds, budget)]

GOLDEN = (1 + math.sqrt(5)) / 2
PLASTIC = 1.3247179572447460

Y_MATRIX = np.array([
    [1, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 0, 0],
])


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def record(criterion, label, ok, detail, seconds, budget):
    ok = bool(ok) and seconds < budget
    RESULTS[criterion].append((label, ok, detail, seconds, budget))
    print(f"criterion {criterion} {label}: {'PASS' if ok else 'FAIL'} {detail} ({seconds:.2f}s of {budget}s)")
    assert seconds < budget, f"over time budget: {seconds:.2f}s >= {budget}s"
    assert ok, detail


def summary_lines():
    lines = []
    for criterion in sorted(RESULTS):
        parts = RESULTS[criterion]
        ok = all(p[1] for p in parts)
        details = "; ".join(f"{label}: {'ok' if good else 'FAILED'} ({detail})" for label, good, detail, _, _ in parts)
        seconds = sum(p[3] for p in parts)
        lines.append(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'} [{seconds:.1f}s] {details}")
    return lines


def sft(*F):
    return sft_to_graph(ForbiddenSet.of(*F))


def random_primitive_sfts(count, seed, max_len=4):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        F = oracles.random_forbidden(rng, max_len=max_len)
        try:
            G = sft_to_graph(ForbiddenSet.of(*F))
        except EmptySubshiftError:
            continue
        if primitivity_check(G.adjacency_matrix())[0]:
            out.append((F, G))
    return out


def closed_walk_pattern(G, rng, max_steps=60):
    out = G.out_edges()
    while True:
        start = v = rng.randrange(G.vertex_count)
        labels = []
        for _ in range(max_steps):
            t, b = out[v][rng.randrange(len(out[v]))]
            labels.append(b)
            v = t
            if v == start:
                return "".join(map(str, labels))


# 1

def test_criterion_01_golden_mean():
    with Timer() as t:
        G = sft("11")
        h = topological_entropy_exact(G)
        d = max_mean_cycle(G)
    err = abs(h - math.log2(GOLDEN))
    record(1, "golden mean", err <= 1e-6 and d == Fraction(1, 2), f"h={h:.10f} |err|={err:.1e}, d={d}", t.seconds, 1)


# 2

def test_criterion_02_x00_111():
    with Timer() as t:
        G = sft("00", "111")
        lam = pf_eigenvalue(G.adjacency_matrix()).eigenvalue
        h = topological_entropy_exact(G)
        d = max_mean_cycle(G)
    ok = abs(lam - PLASTIC) <= 1e-6 and abs(h - 0.4) <= 0.01 and d == Fraction(2, 3) and h < d
    record(2, "X_{00,111}", ok, f"lambda={lam:.10f}, h={h:.4f}, d={d}, h<d={h < d}", t.seconds, 1)


# 3

def test_criterion_03_y_chain():
    with Timer() as t:
        h_y = math.log2(pf_eigenvalue(Y_MATRIX).eigenvalue)
        X = sft("00", "111")
        closure = hereditary_closure_graph(X)
        d = max_mean_cycle(X)
        d_tilde = max_mean_cycle(closure)
        h_tilde = topological_entropy_exact(closure)
    ok = abs(h_y - 0.76) <= 0.01 and d == d_tilde == Fraction(2, 3) and h_tilde >= h_y - 1e-12 and h_y > d_tilde
    detail = f"h(Y)={h_y:.4f}, d={d}, d~={d_tilde}, h~={h_tilde:.4f} >= h(Y) > d~"
    record(3, "Y chain", ok, detail, t.seconds, 5)


# 4

def test_criterion_04_embedding():
    failures = 0
    checked = 0
    with Timer() as t:
        Y = SubshiftSpec.sft("111", "1001")
        for n in range(1, 17):
            for y in language(Y, n):
                x = upgrade_embedding(y)
                s = str(x)
                checked += 1
                if not dominates(x, y) or "00" in s or "111" in s:
                    failures += 1
    record(4, "embedding", failures == 0, f"{checked} words of L_n(Y), n<=16, failures={failures}", t.seconds, 30)


# 5

def distribution(d):
    return BlockDistribution(len(next(iter(d))), oracles.as_blocks(d))


def random_support(rng, n):
    size = rng.randint(1, min(2 ** n, 24))
    values = rng.sample(range(2 ** n), size)
    weights = [rng.random() + 1e-3 for _ in values]
    total = math.fsum(weights)
    return {format(v, f"0{n}b"): w / total for v, w in zip(values, weights)}


def test_criterion_05_convolution_oracle():
    rng = random.Random(2024)
    worst = 0.0
    bad_mass = bad_mono = 0
    with Timer() as t:
        for n in range(1, 11):
            for _ in range(50):
                nu = random_support(rng, n)
                got = convolve_half(distribution(nu))
                want = oracles.convolution(nu)
                keys = set(want) | {str(w) for w in got.probs}
                worst = max(worst, max(abs(float(got[k]) - float(want.get(k, 0))) for k in keys))
                bad_mass += abs(got.total() - 1) > 1e-12
                bad_mono += not monotonicity_check(got).holds
    ok = worst <= 1e-12 and bad_mass == 0 and bad_mono == 0
    record(5, "convolution oracle", ok, f"500 supports, max |diff|={worst:.1e}, mass failures={bad_mass}, monotonicity failures={bad_mono}", t.seconds, 60)


# 6

def test_criterion_06_density_chain():
    rng = random.Random(6)
    N = 10**5
    violations = []
    unslacked = 0
    measures_checked = 0
    with Timer() as t:
        for F, G in random_primitive_sfts(20, seed=606):
            d = max_mean_cycle(G)
            V = G.vertex_count
            maxones = ones_density_series(G, 12)
            for e in maxones:
                if abs(e.value - d) > Fraction(V, e.n):
                    violations.append((F, "V/n", e.n))
            sources = [("empirical", empirical_series(random_walk(G, N, rng), 12), N)]
            for _ in range(5):
                sources.append(("periodic", periodic_series(closed_walk_pattern(G, rng), 12), None))
            for kind, series, window in sources:
                measures_checked += 1
                dn = d_nu(series)
                for e in D_nu_series(series):
                    slack = Fraction(e.n, window) if window else 0
                    if dn > e.value:
                        unslacked += 1
                    if dn > e.value + slack:
                        violations.append((F, kind, "d_nu<=D_nu", e.n))
                    if e.value > maxones[e.n]:
                        violations.append((F, kind, "D_nu<=maxones", e.n))
    detail = f"20 SFTs, {measures_checked} measures, violations={len(violations)} (d_nu>D_nu before n/N boundary slack: {unslacked})"
    record(6, "density chain", not violations, detail, t.seconds, 120)


# 7

PATTERNS = ("01", "011", "0011")


@pytest.mark.parametrize("pattern", PATTERNS)
def test_criterion_07_periodic_gibbs_bound(pattern):
    k = len(pattern)
    d = Fraction(pattern.count("1"), k)
    with Timer() as t:
        kappa = convolve_series(periodic_series(pattern, 12))
        check = gibbs_lower_bound_check(kappa, d, Fraction(1, k))
    detail = f"a*={check.a_star:.6f} vs 1/k={1 / k:.6f}, worst block {check.worst_block} at n={check.worst_n}, exact={check.exact}"
    record(7, f"pattern {pattern}", check.passed and check.exact, detail, t.seconds, 30)


@pytest.mark.parametrize("pattern", PATTERNS)
def test_periodic_gibbs_corrected_bound(pattern):
    # kappa(C) 2^{nd} >= (1/k) 2^{nd - o_n}, with o_n the most ones in an n-window of the orbit
    k = len(pattern)
    d = Fraction(pattern.count("1"), k)
    series = periodic_series(pattern, 12)
    kappa = convolve_series(series)
    for n in range(1, 13):
        o_n = max(w.ones for w in series[n].support())
        exponent = n * d - o_n
        # a*(n)^q >= (1/k)^q 2^{q exponent}, compared exactly with q the denominator of d
        q = exponent.denominator
        for w, p in kappa[n].items():
            assert (p ** q) * Fraction(2) ** (n * d * q) >= Fraction(1, k) ** q * Fraction(2) ** (exponent * q)


# 8

def test_criterion_08_i_sturmian():
    with Timer() as t:
        alpha = 1 / GOLDEN
        x = sturmian_array(SturmianSpec(alpha, 10**6))
        series = empirical_series(x, 24)
        h = d_nu(series)
        report = gibbs_ratio_series(series, h)
    certified = report.all_certified and all(e.ratio <= e.nu for e in report)
    nu8, nu24 = report.entry(8).nu, report.entry(24).nu
    ok = certified and nu24 <= nu8 / 2
    record(8, "(i) Sturmian", ok, f"certified={certified}, nu(C_24)={nu24:.4f} <= nu(C_8)/2={nu8 / 2:.4f}", t.seconds, 180)


@pytest.fixture(scope="module")
def mirsky_series():
    B = parse_family("prime-squares:100")
    x = eta_array(BFreeSpec(tuple(B), 10**6))
    return empirical_series(x, 16)


def test_criterion_08_ii_bfree_decay(mirsky_series):
    with Timer() as t:
        h = d_nu(mirsky_series)
        report = gibbs_ratio_series(mirsky_series, h)
    certified = report.all_certified and all(e.ratio <= e.nu for e in report)
    nu8, nu16 = report.entry(8).nu, report.entry(16).nu
    ok = certified and nu16 <= nu8 / 2
    record(8, "(ii) B-free decay", ok, f"certified={certified}, nu(C_16)={nu16:.5f} <= nu(C_8)/2={nu8 / 2:.5f}", t.seconds, 180)


def test_criterion_08_ii_atom_bound(mirsky_series):
    with Timer() as t:
        atoms = atom_bound_series(mirsky_series)
    values = atoms.values
    stalls = [n + 2 for n, (a, b) in enumerate(zip(values, values[1:])) if not b < a]
    detail = "strictly decreasing over n<=16" if not stalls else f"not strictly decreasing at n={stalls}"
    record(8, "(ii) atom bound", not stalls, detail, t.seconds, 180)


# 9

def closure_of_period_two():
    return hereditary_closure_graph(SubshiftSpec.periodic("01").graph())


def test_criterion_09_inequality_suites():
    with Timer() as t:
        ell_full = {n: 2 ** n for n in range(1, 13)}
        full_entropy = entropy_gibbs_bound_check(bernoulli_series(12), Fraction(1), Fraction(1), n_max=12)
        full_rate = rate_of_convergence_check(ell_full, 1, 1)
        full_exact = gibbs_lower_bound_check(bernoulli_series(12), Fraction(1), Fraction(1)).exact
        G = closure_of_period_two()
        langs = {n: language(G, n) for n in range(1, 13)}
        ell = {n: len(L) for n, L in langs.items()}
        kappa = convolve_series(periodic_series("01", 12))
        per_entropy = entropy_gibbs_bound_check(kappa, Fraction(1, 2), Fraction(1, 4), n_max=12, languages=langs)
        per_rate = rate_of_convergence_check(ell, 0.5, 0.25)
        control = rate_of_convergence_check(ell, 0.5, 0.9)
    ok = (
        full_entropy.applicable and full_entropy.holds and full_rate.holds and full_exact
        and per_entropy.applicable and per_entropy.holds and per_rate.holds
        and not control.holds
    )
    detail = (
        f"full shift entropy/rate={full_entropy.holds}/{full_rate.holds}, "
        f"period-2 closure entropy/rate={per_entropy.holds}/{per_rate.holds}, "
        f"inflated a=0.9 fails at n={control.violations}"
    )
    record(9, "inequality suites", ok, detail, t.seconds, 30)


# 10

def sfts_with_small_density(count, seed):
    """Distinct shifts (by their length-10 language) with 0 < d <= 1/2.

    d = 0 means the shift is the fixed point of 0, where H(d) - h is
    identically zero, so those are skipped.
    """
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < count:
        F = oracles.random_forbidden(rng)
        try:
            G = sft_to_graph(ForbiddenSet.of(*F))
        except EmptySubshiftError:
            continue
        if not primitivity_check(G.adjacency_matrix())[0]:
            continue
        d = max_mean_cycle(G)
        key = frozenset(language(G, 10))
        if not 0 < d <= Fraction(1, 2) or key in seen:
            continue
        seen.add(key)
        out.append((F, G, d))
    return out


def test_criterion_10_entropy_density_bound():
    with Timer() as t:
        G = sft("11")
        gm = entropy_density_bound_check(topological_entropy_exact(G), float(max_mean_cycle(G)))
        checks = [
            (F, entropy_density_bound_check(topological_entropy_exact(G), float(d)))
            for F, G, d in sfts_with_small_density(10, seed=1010)
        ]
    ok = gm.holds and gm.slack > 0 and all(c.holds and c.slack > 0 for _, c in checks)
    F_min, c_min = min(checks, key=lambda fc: fc[1].slack)
    detail = f"golden mean slack={gm.slack:.4f}, min slack over 10 random SFTs={c_min.slack:.4f} (F={F_min})"
    record(10, "h <= H(d)", ok, detail, t.seconds, 30)


# 11

N11 = 10**6


def test_criterion_11_taut_two():
    with Timer() as t:
        r = taut_check([2], N11)
    record(11, "B={2} taut", r.taut, f"gap={r.gaps[2]:.4f}; {r.summary()}", t.seconds, 120)


def test_criterion_11_behrend_product_gaps():
    with Timer() as t:
        B = parse_family("behrend-product:10000")
        r = taut_check(B, N11)
    above = {b: round(g, 4) for b, g in r.gaps.items() if not g < 0.01}
    detail = f"{len(B)} elements, gaps >= 0.01 for b in {above}; [{r.label}]" if above else f"all gaps < 0.01; [{r.label}]"
    record(11, "Behrend-product gaps", not above, detail, t.seconds, 120)


def test_criterion_11_primes_free_density():
    with Timer() as t:
        r = behrend_check(primes_upto(N11), N11)
    record(11, "F_primes log density", r.density_free <= 0.05, f"{r.density_free:.4f} vs 0.05 [{r.label}]", t.seconds, 120)


if __name__ == "__main__":
    import sys

    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
