"""Block distributions, the Bernoulli-half convolution and Gibbs diagnostics.

A :class:`BlockDistribution` is a finitely observed invariant measure: the
probabilities of the length-``n`` cylinders. Periodic and product sources
carry exact :class:`~fractions.Fraction` probabilities, empirical sources
carry floats. Functions are written against plain arithmetic so both kinds
pass through unchanged.

Ergodicity of the underlying measure is never checkable from finitely many
cylinders; reports record it as an assumption.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np

from .spectral import Series, pf_eigenvalue, shannon_entropy
from .subshifts import LabeledGraph
from .words import Block, submasks, to_array, window_codes

Prob = Union[float, Fraction]

ERGODICITY_ASSUMPTION = "ergodicity of nu assumed (not finitely checkable)"


@dataclass(frozen=True)
class BlockDistribution:
    """Probabilities of the length-``length`` blocks."""

    length: int
    probs: Mapping[Block, Prob]
    provenance: str = "explicit"

    def __post_init__(self) -> None:
        probs = dict(self.probs)
        object.__setattr__(self, "probs", probs)
        if self.length < 1:
            raise ValueError("length must be >= 1")
        for w, p in probs.items():
            if w.length != self.length:
                raise ValueError(f"block {w} does not have length {self.length}")
            if p < 0:
                raise ValueError(f"negative probability for {w}")
        total = self.total()
        if abs(total - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {float(total)!r}, not 1")

    def total(self) -> Prob:
        values = list(self.probs.values())
        if all(isinstance(p, (int, Fraction)) for p in values):
            return sum(values, Fraction(0))
        return math.fsum(float(p) for p in values)

    def __getitem__(self, w: Union[Block, str]) -> Prob:
        if isinstance(w, str):
            w = Block.from_str(w)
        return self.probs.get(w, 0)

    def __len__(self) -> int:
        return len(self.probs)

    def items(self):
        return self.probs.items()

    def support(self) -> list[Block]:
        return sorted(w for w, p in self.probs.items() if p > 0)

    @property
    def exact(self) -> bool:
        return all(isinstance(p, (int, Fraction)) for p in self.probs.values())

    def write_csv(self, out: Union[str, Path, IO[str]], header: bool = True) -> None:
        if isinstance(out, (str, Path)):
            with open(out, "w", newline="") as fh:
                self.write_csv(fh, header)
            return
        writer = csv.writer(out)
        if header:
            writer.writerow(["length", "block", "probability", "provenance"])
        for w in sorted(self.probs):
            writer.writerow([self.length, str(w), _fmt_prob(self.probs[w]), self.provenance])


def _fmt_prob(p: Prob) -> str:
    return str(p) if isinstance(p, Fraction) else repr(float(p))


@dataclass
class MeasureSeries:
    """Distributions of lengths ``1..n_max`` from one source."""

    dists: dict[int, BlockDistribution]
    source: str = ""

    def __getitem__(self, n: int) -> BlockDistribution:
        return self.dists[n]

    def __iter__(self):
        return iter(sorted(self.dists))

    @property
    def n_max(self) -> int:
        return max(self.dists)

    def write_csv(self, out: IO[str]) -> None:
        writer = csv.writer(out)
        writer.writerow(["length", "block", "probability", "provenance"])
        for n in self:
            self.dists[n].write_csv(out, header=False)


# sources

def _as_array(x: Union[Block, np.ndarray, Sequence[int]]) -> np.ndarray:
    if isinstance(x, Block):
        return to_array(x)
    return np.asarray(x, dtype=np.uint8)


def empirical_measure(x: Union[Block, np.ndarray], n: int) -> BlockDistribution:
    """Sliding-window frequencies of the length-``n`` factors of ``x``."""
    bits = _as_array(x)
    if bits.size < n:
        raise ValueError(f"window of length {bits.size} is shorter than n={n}")
    codes, counts = np.unique(window_codes(bits, n), return_counts=True)
    total = int(counts.sum())
    probs = {Block(n, int(c)): int(k) / total for c, k in zip(codes, counts)}
    return BlockDistribution(n, probs, f"empirical(window={bits.size})")


def empirical_series(x: Union[Block, np.ndarray], n_max: int) -> MeasureSeries:
    bits = _as_array(x)
    return MeasureSeries({n: empirical_measure(bits, n) for n in range(1, n_max + 1)}, f"empirical(window={bits.size})")


def empirical_grid(x: Union[Block, np.ndarray], n: int, windows: Iterable[int]) -> dict[int, BlockDistribution]:
    """Estimates from the prefixes of ``x`` of each listed size.

    A B-free point is in general only quasi-generic; comparing prefixes
    lets the caller pick sizes that realize the lower density.
    """
    bits = _as_array(x)
    return {N: empirical_measure(bits[:N], n) for N in windows}


def periodic_measure(pattern: Union[Block, str], n: int) -> BlockDistribution:
    """Exact cylinder probabilities of the periodic orbit of ``pattern``."""
    if isinstance(pattern, str):
        pattern = Block.from_str(pattern)
    k = pattern.length
    reps = -(-(n + k) // k)
    text = str(pattern) * reps
    counts = Counter(text[i:i + n] for i in range(k))
    probs = {Block.from_str(w): Fraction(c, k) for w, c in counts.items()}
    return BlockDistribution(n, probs, f"periodic(orbit={pattern})")


def periodic_series(pattern: Union[Block, str], n_max: int) -> MeasureSeries:
    return MeasureSeries({n: periodic_measure(pattern, n) for n in range(1, n_max + 1)}, f"periodic({pattern})")


def bernoulli_measure(n: int, p: Prob = Fraction(1, 2)) -> BlockDistribution:
    """Product measure with ``P(1) = p`` restricted to length ``n``."""
    q = 1 - p
    probs = {Block(n, v): p ** Block(n, v).ones * q ** (n - Block(n, v).ones) for v in range(1 << n)}
    return BlockDistribution(n, probs, f"bernoulli(p={p})")


def bernoulli_series(n_max: int, p: Prob = Fraction(1, 2)) -> MeasureSeries:
    return MeasureSeries({n: bernoulli_measure(n, p) for n in range(1, n_max + 1)}, f"bernoulli(p={p})")


def parry_measure(G: LabeledGraph, n: int, tol: float = 1e-13) -> BlockDistribution:
    """Label image of the maximal-entropy Markov measure of a primitive edge shift.

    ``mu(W) = l^T A_{w_1} ... A_{w_n} r / (lambda^n l.r)`` where ``A_b`` counts
    the edges labeled ``b`` and ``l``, ``r`` are the Perron vectors.
    """
    A = G.adjacency_matrix().astype(np.float64)
    lam, _, r = pf_eigenvalue(A, tol=tol)
    _, _, l = pf_eigenvalue(A.T, tol=tol)
    mats = (G.adjacency_matrix(0) / lam, G.adjacency_matrix(1) / lam)
    norm = float(l @ r)
    probs: dict[Block, float] = {}
    frontier = {0: l}  # packed prefix -> row vector l^T A_{prefix}
    for _ in range(n):
        nxt = {}
        for value, row in frontier.items():
            for b in (0, 1):
                vec = row @ mats[b]
                if vec.any():
                    nxt[(value << 1) | b] = vec
        frontier = nxt
    for value, row in frontier.items():
        probs[Block(n, value)] = float(row @ r) / norm
    total = math.fsum(probs.values())
    probs = {w: p / total for w, p in probs.items()}
    return BlockDistribution(n, probs, "parry")


def parry_series(G: LabeledGraph, n_max: int) -> MeasureSeries:
    return MeasureSeries({n: parry_measure(G, n) for n in range(1, n_max + 1)}, "parry")


# convolution with the Bernoulli(1/2, 1/2) measure

def convolve_half(nu: BlockDistribution) -> BlockDistribution:
    """Cylinder probabilities of ``nu * B(1/2, 1/2)``.

    Each support block ``C'`` pushes ``nu(C') 2^{-#1 C'}`` onto every block
    below it, which is the same as summing over all ``C' >= C``.
    """
    n = nu.length
    acc: dict[int, Prob] = {}
    for w, p in nu.items():
        if p == 0:
            continue
        share = p / (1 << w.ones)
        for s in submasks(w.value):
            acc[s] = acc.get(s, 0) + share
    return BlockDistribution(n, {Block(n, s): v for s, v in acc.items()}, f"convolution({nu.provenance})")


def convolve_series(series: MeasureSeries) -> MeasureSeries:
    return MeasureSeries({n: convolve_half(series[n]) for n in series}, f"convolution({series.source})")


def ones_maximal_block(nu: BlockDistribution) -> Block:
    """Positive-probability block with the most ones (lexicographically smallest on ties)."""
    support = nu.support()
    if not support:
        raise ValueError("distribution has empty support")
    top = max(w.ones for w in support)
    return min(w for w in support if w.ones == top)


class FormulaCheck(NamedTuple):
    holds: bool
    checked: list  # (block, kappa, nu * 2^-#1)


def _maximal_elements(blocks: Sequence[Block]) -> list[Block]:
    values = [w.value for w in blocks]
    out = []
    for w in blocks:
        if not any(v != w.value and v & w.value == w.value for v in values):
            out.append(w)
    return out


def maximal_block_formula_check(nu: BlockDistribution, kappa: BlockDistribution, tol: float = 1e-12) -> FormulaCheck:
    """Check ``kappa(C) = nu(C) 2^{-#1 C}`` on nu-ones-maximal and coordinatewise-maximal support blocks."""
    support = nu.support()
    top = max(w.ones for w in support)
    targets = sorted({w for w in support if w.ones == top} | set(_maximal_elements(support)))
    checked = []
    ok = True
    for c in targets:
        expected = nu[c] / (1 << c.ones)
        got = kappa[c]
        checked.append((c, got, expected))
        if abs(got - expected) > tol:
            ok = False
    return FormulaCheck(ok, checked)


# densities and entropies of measures

def d_nu(series: Union[MeasureSeries, BlockDistribution]) -> Prob:
    dist = series[1] if isinstance(series, MeasureSeries) else series
    if dist.length != 1:
        raise ValueError("d_nu needs the length-1 distribution")
    return dist[Block(1, 1)]


def D_nu_series(series: MeasureSeries) -> Series:
    """``max #1(W) / n`` over positive-probability blocks, per ``n``."""
    out = Series("D_nu")
    for n in series:
        c = ones_maximal_block(series[n])
        out.append(n, Fraction(c.ones, n), c)
    return out


def measure_entropy_series(series: MeasureSeries) -> Series:
    """``(1/n) H(nu restricted to length n)`` in bits."""
    out = Series("measure_entropy")
    for n in series:
        out.append(n, shannon_entropy(float(p) for _, p in series[n].items()) / n)
    return out


def atom_bound_series(series: MeasureSeries) -> Series:
    """Largest cylinder probability per ``n`` (witness: smallest maximizer)."""
    out = Series("atom_bound")
    for n in series:
        dist = series[n]
        top = max(p for _, p in dist.items())
        witness = min(w for w, p in dist.items() if p == top)
        out.append(n, top, witness)
    return out


# Gibbs diagnostics

class GibbsEntry(NamedTuple):
    n: int
    witness: Block
    ones: int
    nu: Prob
    kappa: Prob
    ratio: float
    certified: bool  # n h <= ones, hence ratio <= nu


@dataclass
class GibbsReport:
    h: Prob
    entries: list[GibbsEntry] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=lambda: [ERGODICITY_ASSUMPTION])

    def __iter__(self):
        return iter(self.entries)

    def entry(self, n: int) -> GibbsEntry:
        for e in self.entries:
            if e.n == n:
                return e
        raise KeyError(n)

    @property
    def all_certified(self) -> bool:
        return all(e.certified for e in self.entries)

    def decays(self, n_early: int, n_late: int, factor: float = 0.5) -> bool:
        """Certified ratios at every recorded ``n`` and ``nu(C_late) <= factor * nu(C_early)``."""
        return self.all_certified and self.entry(n_late).nu <= factor * self.entry(n_early).nu

    def write_csv(self, out: Union[str, Path, IO[str]]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, "w", newline="") as fh:
                self.write_csv(fh)
            return
        writer = csv.writer(out)
        writer.writerow(["n", "witness", "ones", "nu", "kappa", "ratio", "certified_bound"])
        for e in self.entries:
            writer.writerow([e.n, str(e.witness), e.ones, _fmt_prob(e.nu), _fmt_prob(e.kappa), repr(e.ratio), int(e.certified)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _pow2(x: Prob) -> float:
    return 2.0 ** float(x)


def gibbs_ratio_series(series: MeasureSeries, h: Prob) -> GibbsReport:
    """Ratios ``kappa(C_n) 2^{n h}`` along the nu-ones-maximal blocks ``C_n``.

    ``kappa(C_n)`` comes from the maximal-block formula ``nu(C_n) 2^{-o_n}``.
    When ``n h <= o_n`` the ratio is bounded by ``nu(C_n)``, which is
    recorded as ``certified``.
    """
    if h < 0:
        raise ValueError("h must be non-negative")
    report = GibbsReport(h)
    for n in series:
        dist = series[n]
        c = ones_maximal_block(dist)
        o = c.ones
        nu_c = dist[c]
        kappa_c = nu_c / (1 << o)
        ratio = float(kappa_c) * _pow2(n * h)
        report.entries.append(GibbsEntry(n, c, o, nu_c, kappa_c, ratio, n * h <= o))
    return report


@dataclass
class GibbsLowerBound:
    a: Prob
    a_star: float
    worst_block: Block
    worst_n: int
    passed: bool
    exact: bool
    per_n: Series


def _exact_exponent(h: Prob) -> Optional[Fraction]:
    if isinstance(h, (int, Fraction)):
        return Fraction(h)
    return None


def gibbs_lower_bound_check(kappa_series: MeasureSeries, h: Prob, a: Prob, n_max: Optional[int] = None) -> GibbsLowerBound:
    """Smallest ``kappa(C) 2^{n h}`` over positive-probability blocks, ``n <= n_max``.

    With exact probabilities and rational ``h = p/q`` the comparison with
    ``a`` is done exactly via ``kappa^q 2^{n p} >= a^q``.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    hq = _exact_exponent(h)
    exact = hq is not None and isinstance(a, (int, Fraction))
    best_key = None
    best = None
    per_n = Series("gibbs_min_ratio")
    for n in kappa_series:
        if n_max is not None and n > n_max:
            break
        dist = kappa_series[n]
        exact_n = exact and dist.exact
        local_key, local = None, None
        for w, p in dist.items():
            if p <= 0:
                continue
            if exact_n:
                key = Fraction(p) ** hq.denominator * Fraction(2) ** (n * hq.numerator)
            else:
                key = float(p) * _pow2(n * h)
            if local_key is None or key < local_key or (key == local_key and w < local):
                local_key, local = key, w
        value = float(dist[local]) * _pow2(n * h)
        per_n.append(n, value, local)
        if exact_n:
            cmp_key = (local_key, n, local)
        else:
            cmp_key = (value, n, local)
        if best_key is None or cmp_key[0] < best_key[0]:
            best_key, best = cmp_key, (n, local, value, local_key)
    n_w, w_w, value_w, key_w = best
    if exact and kappa_series[n_w].exact:
        passed = key_w >= Fraction(a) ** hq.denominator
    else:
        passed = value_w >= float(a)
    return GibbsLowerBound(a, value_w, w_w, n_w, bool(passed), exact, per_n)


class MonotonicityCheck(NamedTuple):
    holds: bool
    violations: list  # (smaller word, larger word, kappa(smaller), kappa(larger))


def monotonicity_check(kappa: BlockDistribution, tol: float = 1e-12) -> MonotonicityCheck:
    """Check ``kappa(W1) >= kappa(W2)`` for every pair ``W1 <= W2`` of length ``n``."""
    n = kappa.length
    vals = {w.value: p for w, p in kappa.items()}
    violations = []
    for v2 in range(1 << n):
        p2 = vals.get(v2, 0)
        for v1 in submasks(v2):
            p1 = vals.get(v1, 0)
            if p1 < p2 - tol:
                violations.append((Block(n, v1), Block(n, v2), p1, p2))
    return MonotonicityCheck(not violations, violations)


@dataclass
class EntropyGibbsCheck:
    applicable: bool
    reason: str
    holds: bool
    slack: Series


def entropy_gibbs_bound_check(
    kappa_series: MeasureSeries,
    h: float,
    a: float,
    n_max: Optional[int] = None,
    languages: Optional[Mapping[int, set]] = None,
    tol: float = 1e-12,
) -> EntropyGibbsCheck:
    """Check ``(1/n) H_n(kappa) >= a (1 - 2^{-nh}) (h - log2(a)/n)`` for each ``n``.

    The bound needs full support and the Gibbs property with constant ``a``.
    The Gibbs part is verified on the inspected lengths; full support is
    verified against ``languages`` when given and otherwise assumed.
    """
    ns = [n for n in kappa_series if n_max is None or n <= n_max]
    reasons = []
    bound = gibbs_lower_bound_check(kappa_series, h, a, n_max)
    if not bound.passed:
        return EntropyGibbsCheck(False, f"inapplicable: Gibbs bound fails (a* = {bound.a_star:.6g} < a = {float(a):.6g})", False, Series("entropy_gibbs_slack"))
    if languages is not None:
        for n in ns:
            if set(kappa_series[n].support()) != set(languages[n]):
                return EntropyGibbsCheck(False, f"inapplicable: kappa not fully supported at n={n}", False, Series("entropy_gibbs_slack"))
    else:
        reasons.append("full support assumed")
    slack = Series("entropy_gibbs_slack")
    ok = True
    for n in ns:
        lhs = shannon_entropy(float(p) for _, p in kappa_series[n].items()) / n
        rhs = float(a) * (1 - 2.0 ** (-n * float(h))) * (float(h) - math.log2(float(a)) / n)
        slack.append(n, lhs - rhs)
        ok &= lhs >= rhs - tol
    return EntropyGibbsCheck(True, "; ".join(reasons) or "preconditions verified", ok, slack)


@dataclass
class RateCheck:
    holds: bool
    lower_slack: Series
    upper_slack: Series

    @property
    def violations(self) -> list[int]:
        bad = [e.n for e in self.lower_slack if e.value < -1e-12]
        bad += [e.n for e in self.upper_slack if e.value < -1e-12]
        return sorted(set(bad))


def rate_of_convergence_check(ell: Union[Mapping[int, int], Iterable[tuple[int, int]]], h: float, a: float, tol: float = 1e-12) -> RateCheck:
    """Check ``0 <= log2(l_n)/n - h <= log2(1/a)/n`` for the given word counts ``l_n``."""
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    if h < 0:
        raise ValueError("h must be non-negative")
    items = sorted(ell.items()) if isinstance(ell, Mapping) else sorted(ell)
    lower, upper = Series("rate_lower_slack"), Series("rate_upper_slack")
    ok = True
    for n, count in items:
        gap = math.log2(count) / n - float(h)
        lo = gap
        hi = math.log2(1 / float(a)) / n - gap
        lower.append(n, lo)
        upper.append(n, hi)
        ok &= lo >= -tol and hi >= -tol
    return RateCheck(ok, lower, upper)
