"""Entropy and density of presented subshifts.

Logarithms are base 2 throughout. Topological entropy of a sofic
presentation is computed from a right-resolving presentation (the subset
construction is applied when the input graph is not right-resolving), so
the edge-count growth equals the word-count growth.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, NamedTuple, Optional, Union

import numpy as np

from .subshifts import (
    DEFAULT_ENUMERATION_CAP,
    LabeledGraph,
    SubshiftSpec,
    graph_language_codes,
    language,
)
from .words import Block


class NotPrimitiveError(ValueError):
    pass


class NoInvariantMeasureError(ValueError):
    pass


class BoundNotApplicableError(ValueError):
    pass


class SeriesEntry(NamedTuple):
    n: int
    value: Union[float, Fraction]
    witness: Optional[Block] = None


@dataclass
class Series:
    """An indexed numeric series ``n -> value`` with optional witness blocks."""

    name: str
    entries: list[SeriesEntry] = field(default_factory=list)

    def append(self, n: int, value, witness: Optional[Block] = None) -> None:
        self.entries.append(SeriesEntry(n, value, witness))

    @property
    def values(self) -> list:
        return [e.value for e in self.entries]

    def __getitem__(self, n: int):
        for e in self.entries:
            if e.n == n:
                return e.value
        raise KeyError(n)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def write_csv(self, out: Union[str, Path, IO[str]]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, "w", newline="") as fh:
                self.write_csv(fh)
            return
        writer = csv.writer(out)
        writer.writerow(["n", "value", "witness_block"])
        for e in self.entries:
            writer.writerow([e.n, repr(float(e.value)), "" if e.witness is None else str(e.witness)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


EntropySeries = Series


def adjacency_matrix(G: LabeledGraph) -> np.ndarray:
    return G.adjacency_matrix()


def primitivity_check(A: np.ndarray) -> tuple[bool, str]:
    """Decide primitivity by repeated boolean squaring past the Wielandt bound."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False, "matrix is not square"
    if (A < 0).any():
        return False, "matrix has negative entries"
    dim = A.shape[0]
    P = (A > 0).astype(np.int64)
    exponent = 1
    bound = (dim - 1) ** 2 + 1
    while True:
        if P.all():
            return True, f"A^{exponent} > 0"
        if exponent >= bound:
            break
        P = ((P @ P) > 0).astype(np.int64)
        exponent *= 2
    if not P.any(axis=1).all():
        return False, "some row of A is zero (matrix is nilpotent on a vertex)"
    return False, f"A^{exponent} has zero entries beyond the Wielandt bound {bound}: reducible or periodic"


def is_primitive(A: np.ndarray) -> bool:
    return primitivity_check(A)[0]


class PerronResult(NamedTuple):
    eigenvalue: float
    iterations: int
    vector: np.ndarray


def pf_eigenvalue(A, tol: float = 1e-12, max_iter: int = 10**6) -> PerronResult:
    """Perron-Frobenius eigenvalue of a primitive nonnegative matrix by power iteration.

    Stops once the Collatz-Wielandt bracket ``min (Av)_i/v_i <= lambda <=
    max (Av)_i/v_i`` is narrower than ``tol``; the midpoint is returned.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = np.asarray(A, dtype=np.float64)
    ok, reason = primitivity_check(A)
    if not ok:
        raise NotPrimitiveError(f"not primitive: {reason}")
    v = np.ones(A.shape[0])
    for it in range(1, max_iter + 1):
        w = A @ v
        ratios = w / v
        lo, hi = ratios.min(), ratios.max()
        if hi - lo <= tol:
            return PerronResult(float((lo + hi) / 2), it, v)
        v = w / w.max()
    raise RuntimeError(f"power iteration did not converge in {max_iter} iterations")


def _strongly_connected_components(A: np.ndarray) -> list[list[int]]:
    import networkx as nx

    D = nx.DiGraph()
    D.add_nodes_from(range(A.shape[0]))
    D.add_edges_from(zip(*np.nonzero(A)))
    return [sorted(c) for c in nx.strongly_connected_components(D)]


def spectral_radius(A, tol: float = 1e-12) -> float:
    """Largest PF eigenvalue over irreducible components (0 if none carries a cycle).

    Each irreducible block ``B`` is shifted to the primitive ``I + B``.
    """
    A = np.asarray(A, dtype=np.float64)
    best = 0.0
    for comp in _strongly_connected_components(A):
        B = A[np.ix_(comp, comp)]
        if len(comp) == 1 and B[0, 0] == 0:
            continue
        lam = pf_eigenvalue(np.eye(len(comp)) + B, tol=tol).eigenvalue - 1.0
        best = max(best, lam)
    return best


def right_resolving(G: LabeledGraph) -> LabeledGraph:
    """Subset construction from the set of all vertices (empty set dropped)."""
    if G.is_right_resolving():
        return G
    out = G.out_edges()
    start = frozenset(range(G.vertex_count))
    index = {start: 0}
    queue = [start]
    edges = []
    while queue:
        S = queue.pop()
        for b in (0, 1):
            T = frozenset(t for s in S for t, lab in out[s] if lab == b)
            if not T:
                continue
            if T not in index:
                index[T] = len(index)
                queue.append(T)
            edges.append((index[S], index[T], b))
    return LabeledGraph(len(index), tuple(edges))


def topological_entropy_exact(G: Union[LabeledGraph, SubshiftSpec], tol: float = 1e-12) -> float:
    """``log2`` of the growth rate of the language of a presented subshift."""
    if isinstance(G, SubshiftSpec):
        G = G.graph()
    lam = spectral_radius(right_resolving(G).adjacency_matrix(), tol=tol)
    if lam <= 0:
        raise NoInvariantMeasureError("presentation carries no cycle")
    return max(0.0, math.log2(lam))


def entropy_series(spec: SubshiftSpec, n_max: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Series:
    """``(1/n) log2 |L_n|`` for ``n = 1..n_max``."""
    series = Series("entropy")
    for n in range(1, n_max + 1):
        if spec.has_presentation and spec.kind != "full":
            count = len(graph_language_codes(spec.graph(), n, cap))
        else:
            count = len(language(spec, n, cap))
        series.append(n, math.log2(count) / n)
    return series


def max_mean_cycle(G: LabeledGraph) -> Fraction:
    """Exact maximum over directed cycles of (sum of labels) / (cycle length).

    Karp's dynamic program is run inside every strongly connected component.
    """
    A = G.adjacency_matrix()
    best: Optional[Fraction] = None
    NEG = None
    for comp in _strongly_connected_components(A):
        members = set(comp)
        inner = [(s, t, b) for s, t, b in G.edges if s in members and t in members]
        if not inner:
            continue
        m = len(comp)
        pos = {v: i for i, v in enumerate(comp)}
        # D[k][v]: max label sum over walks of exactly k edges from comp[0] to v
        D = [[NEG] * m for _ in range(m + 1)]
        D[0][0] = 0
        for k in range(1, m + 1):
            prev, cur = D[k - 1], D[k]
            for s, t, b in inner:
                ps = prev[pos[s]]
                if ps is None:
                    continue
                val = ps + b
                j = pos[t]
                if cur[j] is None or val > cur[j]:
                    cur[j] = val
        for v in range(m):
            if D[m][v] is None:
                continue
            worst = min(
                Fraction(D[m][v] - D[k][v], m - k) for k in range(m) if D[k][v] is not None
            )
            if best is None or worst > best:
                best = worst
    if best is None:
        raise NoInvariantMeasureError("graph has no cycle, so it supports no invariant measure")
    return best


def ones_density_series(spec: Union[SubshiftSpec, LabeledGraph], n_max: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Series:
    """``max_{W in L_n} #1(W) / n`` with the lexicographically smallest maximizer."""
    series = Series("ones_density")
    for n in range(1, n_max + 1):
        words = language(spec, n, cap)
        top = max(w.ones for w in words)
        witness = min(w for w in words if w.ones == top)
        series.append(n, Fraction(top, n), witness)
    return series


def shannon_entropy(p: Iterable[float]) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    p = [float(x) for x in p]
    if any(x < 0 for x in p) or not math.isclose(math.fsum(p), 1.0, rel_tol=0, abs_tol=1e-12):
        raise ValueError("not a probability vector")
    return -math.fsum(x * math.log2(x) for x in p if x > 0)


def binary_entropy(p: float) -> float:
    return shannon_entropy((p, 1 - p))


class BoundCheck(NamedTuple):
    holds: bool
    slack: float


def entropy_density_bound_check(h: float, d: float, tol: float = 1e-12) -> BoundCheck:
    """Check ``h <= H(d)`` for ``0 <= d <= 1/2``; returns the slack ``H(d) - h``."""
    if d > 0.5:
        raise BoundNotApplicableError(f"bound not applicable: d = {d} > 1/2")
    if d < 0 or h < 0:
        raise ValueError("h and d must be non-negative")
    slack = binary_entropy(float(d)) - h
    return BoundCheck(slack >= -tol, slack)
