"""Generic points (B-free, Sturmian) and number-theoretic density diagnostics.

All windows are one-sided and indexed by the integers ``1..N``; position 0
is never emitted because every ``b`` divides 0.

Densities here use the natural logarithm in the normalizer of the
logarithmic density, ``(1/ln N) * sum_{a <= N, a member} 1/a``. Entropies
elsewhere in the package are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .words import Block, from_array, to_array

EVIDENCE_LABEL = "numeric evidence, not a proof"

Alpha = Union[float, Fraction]


@dataclass(frozen=True)
class BFreeSpec:
    """Finite set ``B`` together with an observation window ``1..window``."""

    B: tuple[int, ...]
    window: int

    def __post_init__(self) -> None:
        B = tuple(primitivize(self.B))
        object.__setattr__(self, "B", B)
        if not B:
            raise ValueError("B must be non-empty")
        if self.window < max(B):
            raise ValueError(f"window {self.window} is smaller than max(B) = {max(B)}")


@dataclass(frozen=True)
class SturmianSpec:
    """Rotation coding ``x_n = floor((n+1)alpha + rho) - floor(n alpha + rho)``.

    ``alpha`` may be a float or a :class:`~fractions.Fraction`; a rational
    with denominator at most ``window`` is rejected since the window would
    then be visibly periodic.
    """

    alpha: Alpha
    window: int
    rho: Alpha = 0

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0 <= self.rho < 1:
            raise ValueError("rho must lie in [0, 1)")
        if self.window < 1:
            raise ValueError("window must be positive")
        approx = Fraction(self.alpha).limit_denominator(self.window)
        if isinstance(self.alpha, Fraction):
            degenerate = approx == self.alpha
        else:
            degenerate = abs(float(approx) - self.alpha) < 1e-13
        if degenerate:
            raise ValueError(
                f"alpha={self.alpha} is rational with denominator <= window; "
                "use an irrational value or a higher-denominator convergent"
            )


def primitivize(B: Sequence[int]) -> list[int]:
    """Drop every element that is a multiple of another element."""
    for b in B:
        if int(b) != b or b < 2:
            raise ValueError(f"elements of B must be integers >= 2, got {b!r}")
    values = sorted(set(int(b) for b in B))
    if not values:
        return []
    # a value survives unless a smaller kept element already marked it
    covered = np.zeros(values[-1] + 1, dtype=bool)
    out: list[int] = []
    for b in values:
        if not covered[b]:
            out.append(b)
            covered[b::b] = True
    return out


def multiples_mask(B: Sequence[int], N: int) -> np.ndarray:
    """Boolean array ``m`` with ``m[i-1]`` true iff some ``b`` divides ``i`` (1 <= i <= N)."""
    m = np.zeros(N + 1, dtype=bool)
    for b in B:
        m[b::b] = True
    return m[1:]


def divisor_counts(B: Sequence[int], N: int) -> np.ndarray:
    """Number of elements of ``B`` dividing ``i`` for ``i = 1..N``."""
    c = np.zeros(N + 1, dtype=np.int32)
    for b in B:
        c[b::b] += 1
    return c[1:]


def eta_array(spec: BFreeSpec) -> np.ndarray:
    return (~multiples_mask(spec.B, spec.window)).astype(np.uint8)


def eta(spec: BFreeSpec) -> Block:
    """Indicator of the B-free integers on ``1..window``."""
    return from_array(eta_array(spec))


def admissible_check(x: Block, B: Sequence[int]) -> dict[int, bool | None]:
    """Per ``b``: does the support of ``x`` (positions 1..N) miss some residue class mod ``b``?

    ``None`` means inconclusive: the window is shorter than ``b``.
    """
    support = np.flatnonzero(to_array(x)) + 1
    verdict: dict[int, bool | None] = {}
    for b in B:
        if x.length < b:
            verdict[b] = None
            continue
        hit = np.unique(support % b).size
        verdict[b] = bool(hit < b)
    return verdict


def _harmonic_weights(N: int) -> np.ndarray:
    return 1.0 / np.arange(1, N + 1, dtype=np.float64)


def logarithmic_density(members: Union[np.ndarray, Callable[[np.ndarray], np.ndarray]], N: int) -> float:
    """``(1/ln N) * sum_{a <= N, a member} 1/a``.

    ``members`` is either a boolean array over ``1..N`` (index 0 is the
    integer 1) or a vectorized predicate evaluated on ``np.arange(1, N+1)``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if callable(members):
        mask = np.asarray(members(np.arange(1, N + 1)), dtype=bool)
    else:
        mask = np.asarray(members, dtype=bool)
    if mask.shape != (N,):
        raise ValueError(f"membership mask must have shape ({N},), got {mask.shape}")
    return float(_harmonic_weights(N)[mask].sum() / math.log(N))


@dataclass
class TautReport:
    N: int
    margin: float
    gaps: dict[int, float]
    density_multiples: float
    label: str = EVIDENCE_LABEL

    @property
    def verdicts(self) -> dict[int, bool]:
        return {b: g > self.margin for b, g in self.gaps.items()}

    @property
    def taut(self) -> bool:
        return all(self.verdicts.values())

    def summary(self) -> str:
        failing = [b for b, ok in self.verdicts.items() if not ok]
        head = "taut" if self.taut else f"non-taut ({len(failing)} of {len(self.gaps)} gaps <= {self.margin})"
        return f"{head} at N={self.N} [{self.label}]"


def taut_check(B: Sequence[int], N: int = 10**6, margin: float = 0.01) -> TautReport:
    """Estimate ``delta(M_B) - delta(M_{B minus b})`` for every ``b``.

    An integer leaves ``M_B`` when ``b`` is removed exactly when ``b`` is its
    only divisor in ``B``, so one divisor-count sieve serves every ``b``.
    """
    B = primitivize(B)
    counts = divisor_counts(B, N)
    w = _harmonic_weights(N)
    norm = math.log(N)
    gaps = {}
    for b in B:
        idx = slice(b - 1, N, b)
        gaps[b] = float(w[idx][counts[idx] == 1].sum() / norm)
    total = float(w[counts > 0].sum() / norm)
    return TautReport(N=N, margin=margin, gaps=gaps, density_multiples=total)


@dataclass
class BehrendReport:
    N: int
    density_free: float
    threshold: float
    label: str = EVIDENCE_LABEL

    @property
    def behrend(self) -> bool:
        return self.density_free < self.threshold


def behrend_check(B: Sequence[int], N: int = 10**6, threshold: float = 0.05) -> BehrendReport:
    """Logarithmic density of the B-free integers up to ``N``.

    Convergence in ``N`` is logarithmically slow; a single ``N`` only
    witnesses a trend.
    """
    free = ~multiples_mask(primitivize(B), N)
    return BehrendReport(N=N, density_free=logarithmic_density(free, N), threshold=threshold)


def sturmian_array(spec: SturmianSpec) -> np.ndarray:
    n = np.arange(1, spec.window + 2, dtype=np.int64)
    if isinstance(spec.alpha, Fraction) and isinstance(spec.rho, (int, Fraction)):
        # exact integer floors: floor((n p + r) / q) over a common denominator
        a, r = Fraction(spec.alpha), Fraction(spec.rho)
        q = math.lcm(a.denominator, r.denominator)
        ap, rp = a.numerator * (q // a.denominator), r.numerator * (q // r.denominator)
        if ap * (spec.window + 2) + rp > 2**62:
            raise OverflowError("convergent too large for exact int64 evaluation")
        floors = (n * ap + rp) // q
    else:
        floors = np.floor(n * float(spec.alpha) + float(spec.rho)).astype(np.int64)
    return np.diff(floors).astype(np.uint8)


def sturmian_point(spec: SturmianSpec) -> Block:
    """Rotation coding on positions ``1..window``."""
    return from_array(sturmian_array(spec))


# named families of B used by the command line

def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).tolist()


def parse_family(text: str) -> list[int]:
    """Parse ``B`` given explicitly (``"4,9,25"``) or as a named family.

    Families: ``prime-squares:CUTOFF`` (p^2 for primes p <= CUTOFF),
    ``primes:CUTOFF``, ``behrend-product:CUTOFF`` (2p for odd primes p <= CUTOFF),
    ``progression:A,R:CUTOFF`` (members of A*k+R in 2..CUTOFF).
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    try:
        if name == "prime-squares":
            return [p * p for p in primes_upto(int(rest))]
        if name == "primes":
            return primes_upto(int(rest))
        if name == "behrend-product":
            return [2 * p for p in primes_upto(int(rest)) if p > 2]
        if name == "progression":
            ar, _, cutoff = rest.partition(":")
            a, r = (int(t) for t in ar.split(","))
            return [v for v in range(r, int(cutoff) + 1, a) if v >= 2]
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ValueError(f"cannot parse B from {text!r}: {exc}") from None
