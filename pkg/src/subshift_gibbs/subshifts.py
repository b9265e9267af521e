"""Subshift presentations, languages and hereditary closures.

Three presentation-backed kinds (``sft``, ``sofic``, ``periodic``, plus
``full``) have exact languages computed as labels of paths in a labeled
graph. The generator-backed kinds (``bfree``, ``sturmian``) only expose the
factors observed in a finite generated window.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .generators import BFreeSpec, SturmianSpec, eta_array, parse_family, sturmian_array
from .words import Block, contains, dominates, submasks, window_codes

DEFAULT_ENUMERATION_CAP = 24


class EmptySubshiftError(ValueError):
    pass


class EnumerationCapError(RuntimeError):
    pass


class SpecParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


@dataclass(frozen=True)
class ForbiddenSet:
    words: frozenset[Block] = frozenset()

    @classmethod
    def of(cls, *words: Union[str, Block]) -> "ForbiddenSet":
        return cls(frozenset(Block.from_str(w) if isinstance(w, str) else w for w in words))

    @property
    def max_len(self) -> int:
        return max((w.length for w in self.words), default=0)

    def __iter__(self) -> Iterator[Block]:
        return iter(sorted(self.words))

    def __len__(self) -> int:
        return len(self.words)

    def __str__(self) -> str:
        return "{" + ", ".join(str(w) for w in self) + "}"


@dataclass(frozen=True)
class LabeledGraph:
    """Finite directed multigraph with 0/1 edge labels.

    ``names`` optionally records what each vertex stands for (e.g. the
    admissible block of a higher-block presentation).
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if self.vertex_count < 1:
            raise ValueError("a labeled graph needs at least one vertex")
        for s, t, b in self.edges:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"edge ({s}, {t}, {b}) references a missing vertex")
            if b not in (0, 1):
                raise ValueError(f"edge label {b!r} is not 0 or 1")
        if self.names is not None and len(self.names) != self.vertex_count:
            raise ValueError("names must have one entry per vertex")

    def out_edges(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for s, t, b in self.edges:
            out[s].append((t, b))
        return out

    def adjacency_matrix(self, label: Optional[int] = None, order: Optional[list] = None) -> np.ndarray:
        """Edge-count matrix, optionally restricted to one label.

        ``order`` lists vertices (indices or names) to fix the row layout.
        """
        A = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for s, t, b in self.edges:
            if label is None or b == label:
                A[s, t] += 1
        if order is not None:
            idx = [self.names.index(v) if isinstance(v, str) else v for v in order]
            A = A[np.ix_(idx, idx)]
        return A

    def is_essential(self) -> bool:
        has_in = {t for _, t, _ in self.edges}
        has_out = {s for s, _, _ in self.edges}
        return all(v in has_in and v in has_out for v in range(self.vertex_count))

    def is_right_resolving(self) -> bool:
        seen = set()
        for s, _, b in self.edges:
            if (s, b) in seen:
                return False
            seen.add((s, b))
        return True

    def pruned(self) -> "LabeledGraph":
        """Remove vertices without incoming or outgoing edges until none remain."""
        alive = set(range(self.vertex_count))
        edges = list(self.edges)
        while True:
            has_in = {t for s, t, _ in edges}
            has_out = {s for s, t, _ in edges}
            keep = alive & has_in & has_out
            if keep == alive:
                break
            alive = keep
            edges = [e for e in edges if e[0] in alive and e[1] in alive]
        if not alive:
            raise EmptySubshiftError("the presentation has no bi-infinite path")
        order = sorted(alive)
        remap = {v: i for i, v in enumerate(order)}
        names = tuple(self.names[v] for v in order) if self.names is not None else None
        return LabeledGraph(
            len(order), tuple((remap[s], remap[t], b) for s, t, b in edges), names
        )


@dataclass(frozen=True)
class SubshiftSpec:
    """Uniform handle over the supported subshift descriptions."""

    kind: str
    payload: object = None

    KINDS = ("sft", "sofic", "bfree", "sturmian", "periodic", "full")

    def __post_init__(self) -> None:
        expected = {
            "sft": ForbiddenSet,
            "sofic": LabeledGraph,
            "bfree": BFreeSpec,
            "sturmian": SturmianSpec,
            "periodic": Block,
            "full": type(None),
        }
        if self.kind not in expected:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not isinstance(self.payload, expected[self.kind]):
            raise TypeError(f"kind {self.kind!r} needs a {expected[self.kind].__name__} payload")

    @classmethod
    def sft(cls, *words: Union[str, Block]) -> "SubshiftSpec":
        return cls("sft", ForbiddenSet.of(*words))

    @classmethod
    def sofic(cls, graph: LabeledGraph) -> "SubshiftSpec":
        return cls("sofic", graph)

    @classmethod
    def periodic(cls, pattern: Union[str, Block]) -> "SubshiftSpec":
        return cls("periodic", Block.from_str(pattern) if isinstance(pattern, str) else pattern)

    @classmethod
    def full(cls) -> "SubshiftSpec":
        return cls("full", None)

    @classmethod
    def bfree(cls, B: Iterable[int], window: int) -> "SubshiftSpec":
        return cls("bfree", BFreeSpec(tuple(B), window))

    @classmethod
    def sturmian(cls, alpha, window: int, rho=0) -> "SubshiftSpec":
        return cls("sturmian", SturmianSpec(alpha, window, rho))

    @property
    def has_presentation(self) -> bool:
        return self.kind in ("sft", "sofic", "periodic", "full")

    def graph(self) -> LabeledGraph:
        if self.kind == "sft":
            return sft_to_graph(normalize(self.payload))
        if self.kind == "sofic":
            return self.payload
        if self.kind == "periodic":
            return periodic_graph(self.payload)
        if self.kind == "full":
            return full_shift_graph()
        raise TypeError(f"kind {self.kind!r} has no finite presentation")

    def point_array(self) -> np.ndarray:
        """Generated window as a 0/1 array (generator-backed kinds only)."""
        if self.kind == "bfree":
            return eta_array(self.payload)
        if self.kind == "sturmian":
            return sturmian_array(self.payload)
        raise TypeError(f"kind {self.kind!r} has no generated point")


def normalize(F: ForbiddenSet) -> ForbiddenSet:
    """Drop forbidden words that contain a shorter forbidden word."""
    words = sorted(F.words, key=lambda w: (w.length, w.value))
    kept: list[Block] = []
    for w in words:
        if not any(contains(w, k) for k in kept):
            kept.append(w)
    return ForbiddenSet(frozenset(kept))


def full_shift_graph() -> LabeledGraph:
    return LabeledGraph(1, ((0, 0, 0), (0, 0, 1)), ("",))


def periodic_graph(pattern: Block) -> LabeledGraph:
    """Single cycle reading ``pattern`` forever."""
    k = pattern.length
    return LabeledGraph(k, tuple((i, (i + 1) % k, pattern[i]) for i in range(k)))


def _avoids(w: Block, F: ForbiddenSet) -> bool:
    return not any(contains(w, f) for f in F.words)


def sft_to_graph(F: ForbiddenSet) -> LabeledGraph:
    """Higher-block presentation of ``X_F`` on admissible blocks of length ``max_len - 1``.

    Vertices are sorted lexicographically. An edge ``u -> v`` labeled ``b``
    exists when ``u + b`` avoids ``F`` and ends with ``v``.
    """
    if not F.words:
        return full_shift_graph()
    k = max(F.max_len - 1, 1)
    vertices = [Block(k, v) for v in range(1 << k)]
    vertices = [u for u in vertices if _avoids(u, F)]
    if not vertices:
        raise EmptySubshiftError(f"no admissible blocks of length {k} for F={F}")
    index = {u.value: i for i, u in enumerate(vertices)}
    mask = (1 << k) - 1
    edges = []
    for i, u in enumerate(vertices):
        for b in (0, 1):
            ub = Block(k + 1, (u.value << 1) | b)
            v = ub.value & mask
            if v in index and _avoids(ub, F):
                edges.append((i, index[v], b))
    graph = LabeledGraph(len(vertices), tuple(edges), tuple(str(u) for u in vertices))
    return graph.pruned()


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise EnumerationCapError(f"n={n} exceeds the enumeration cap {cap}")


def graph_language_codes(G: LabeledGraph, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> dict[int, frozenset]:
    """Map each length-``n`` path label (packed) to the set of end vertices."""
    _check_cap(n, cap)
    out = G.out_edges()
    frontier: dict[int, set] = {}
    for s in range(G.vertex_count):
        for t, b in out[s]:
            frontier.setdefault(b, set()).add(t)
    for _ in range(n - 1):
        nxt: dict[int, set] = {}
        for code, ends in frontier.items():
            for s in ends:
                for t, b in out[s]:
                    nxt.setdefault((code << 1) | b, set()).add(t)
        frontier = nxt
    return {c: frozenset(v) for c, v in frontier.items()}


def window_language(bits: np.ndarray, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> set[Block]:
    _check_cap(n, cap)
    return {Block(n, int(c)) for c in np.unique(window_codes(bits, n))}


def language(spec: Union[SubshiftSpec, LabeledGraph], n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> set[Block]:
    """Length-``n`` blocks of the subshift (window-observed for generator kinds)."""
    if isinstance(spec, LabeledGraph):
        return {Block(n, c) for c in graph_language_codes(spec, n, cap)}
    if spec.kind == "full":
        _check_cap(n, cap)
        return {Block(n, v) for v in range(1 << n)}
    if spec.has_presentation:
        return {Block(n, c) for c in graph_language_codes(spec.graph(), n, cap)}
    return window_language(spec.point_array(), n, cap)


def is_hereditary_sufficient(F: ForbiddenSet) -> bool:
    """Check that every upgrade ``C' >= C`` of a forbidden ``C`` still contains a forbidden word.

    This is only a sufficient condition for heredity of ``X_F``.
    """
    for c in F.words:
        for v in range(1 << c.length):
            if v & c.value != c.value:
                continue
            if _avoids(Block(c.length, v), F):
                return False
    return True


def hereditary_closure_graph(G: LabeledGraph) -> LabeledGraph:
    """Add a 0-labeled copy of every 1-labeled edge."""
    extra = tuple((s, t, 0) for s, t, b in G.edges if b == 1)
    return LabeledGraph(G.vertex_count, G.edges + extra, G.names)


def hereditary_closure_language(L: Iterable[Block]) -> set[Block]:
    """Downward closure of a set of equal-length blocks."""
    L = list(L)
    lengths = {w.length for w in L}
    if len(lengths) > 1:
        raise ValueError("all blocks must have the same length")
    out: set[Block] = set()
    seen: set[int] = set()
    for w in L:
        for s in submasks(w.value):
            if s in seen:
                continue
            seen.add(s)
            out.add(Block(w.length, s))
    return out


_Y_FORBIDDEN = ("111", "1001")


def _interior_fill(gap: int) -> str:
    if gap == 1:
        return "0"
    if gap % 2 == 1:
        return "0" + "10" * ((gap - 1) // 2)
    if gap >= 4:
        return "0110" + "10" * ((gap - 4) // 2)
    raise ValueError("interior zero-gap of length 2 cannot occur outside 1001")


def upgrade_embedding(y: Union[Block, str]) -> Block:
    """Raise zeros of a word of ``X_{111,1001}`` so that it avoids ``00`` and ``111``.

    Interior gaps ``1 0^l 1``: ``l = 1`` is kept, odd ``l >= 3`` becomes
    ``0(10)*``, even ``l >= 4`` becomes ``0110(10)*``. Every fill starts and
    ends with 0, so adjacent runs of ones never grow. Zero runs touching an
    end of the word are filled with alternating symbols, with a 0 next to
    the neighbouring 1.
    """
    y = Block.from_str(y) if isinstance(y, str) else y
    s = str(y)
    for bad in _Y_FORBIDDEN:
        if bad in s:
            raise ValueError(f"{s} is not in the language of X_{{111,1001}} (contains {bad})")
    n = len(s)
    out = list(s)
    for m in re.finditer("0+", s):
        i, j = m.start(), m.end()
        gap = j - i
        if i > 0 and j < n:
            fill = _interior_fill(gap)
        elif i == 0 and j == n:
            fill = ("10" * n)[:n]
        elif i == 0:
            # 1 follows; alternate leftwards starting with 0
            fill = ("01" * gap)[:gap][::-1]
        else:
            fill = ("01" * gap)[:gap]
        out[i:j] = fill
    x = Block.from_str("".join(out))
    assert dominates(x, y)
    return x


# sampling helpers used by experiments

def random_walk(G: LabeledGraph, N: int, rng: Union[random.Random, int, None] = None) -> np.ndarray:
    """Labels of a uniformly random walk of ``N`` edges on an essential graph."""
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    out = G.out_edges()
    v = rng.randrange(G.vertex_count)
    labels = np.empty(N, dtype=np.uint8)
    for i in range(N):
        t, b = out[v][rng.randrange(len(out[v]))]
        labels[i] = b
        v = t
    return labels


def cycle_patterns(G: LabeledGraph, limit: int = 64) -> list[Block]:
    """Label words of simple cycles (one per parallel-edge choice), in a fixed order."""
    import networkx as nx

    D = nx.DiGraph()
    D.add_nodes_from(range(G.vertex_count))
    labels: dict[tuple[int, int], set[int]] = {}
    for s, t, b in G.edges:
        D.add_edge(s, t)
        labels.setdefault((s, t), set()).add(b)
    found: list[Block] = []
    for cycle in sorted(nx.simple_cycles(D), key=lambda c: (len(c), c)):
        steps = [sorted(labels[(cycle[i], cycle[(i + 1) % len(cycle)])]) for i in range(len(cycle))]
        for choice in itertools.product(*steps):
            found.append(Block.from_bits(choice))
            if len(found) >= limit:
                return found
    return found


# structured-text spec files

def _fmt_number(x) -> str:
    return str(x) if isinstance(x, Fraction) else repr(x)


def _parse_number(text: str, line: int, name: str):
    try:
        if "/" in text:
            return Fraction(text)
        return int(text) if re.fullmatch(r"-?\d+", text) else float(text)
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"not a number: {text!r}", line, name) from None


def dump_spec(spec: SubshiftSpec) -> str:
    lines = [f"kind: {spec.kind}"]
    p = spec.payload
    if spec.kind == "sft":
        lines.append("forbidden: " + " ".join(str(w) for w in p))
    elif spec.kind == "sofic":
        lines.append(f"vertices: {p.vertex_count}")
        if p.names is not None and all(p.names):
            lines.append("names: " + " ".join(p.names))
        lines += [f"edge: {s} {t} {b}" for s, t, b in p.edges]
    elif spec.kind == "bfree":
        lines.append("B: " + " ".join(str(b) for b in p.B))
        lines.append(f"window: {p.window}")
    elif spec.kind == "sturmian":
        lines.append(f"alpha: {_fmt_number(p.alpha)}")
        lines.append(f"rho: {_fmt_number(p.rho)}")
        lines.append(f"window: {p.window}")
    elif spec.kind == "periodic":
        lines.append(f"pattern: {p}")
    return "\n".join(lines) + "\n"


def parse_spec(text: str) -> SubshiftSpec:
    """Parse the ``key: value`` spec format (``#`` starts a comment).

    ``edge`` may repeat; every other key appears at most once.
    """
    fields: dict[str, tuple[int, str]] = {}
    edges: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise SpecParseError("expected 'key: value'", lineno)
        key, value = key.strip(), value.strip()
        if key == "edge":
            edges.append((lineno, value))
        elif key in fields:
            raise SpecParseError("duplicate key", lineno, key)
        else:
            fields[key] = (lineno, value)

    def get(name: str, required: bool = True) -> tuple[int, str]:
        if name not in fields:
            if required:
                raise SpecParseError("missing required field", None, name)
            return (None, "")
        return fields[name]

    line, kind = get("kind")
    if kind not in SubshiftSpec.KINDS:
        raise SpecParseError(f"unknown kind {kind!r}", line, "kind")
    try:
        if kind == "full":
            return SubshiftSpec.full()
        if kind == "sft":
            line, words = get("forbidden", required=False)
            try:
                return SubshiftSpec.sft(*words.replace(",", " ").split())
            except ValueError as exc:
                raise SpecParseError(str(exc), line, "forbidden") from None
        if kind == "periodic":
            line, pattern = get("pattern")
            try:
                return SubshiftSpec.periodic(pattern)
            except ValueError as exc:
                raise SpecParseError(str(exc), line, "pattern") from None
        if kind == "sofic":
            line, vc = get("vertices")
            vertex_count = _parse_number(vc, line, "vertices")
            triples = []
            for eline, value in edges:
                parts = value.split()
                if len(parts) != 3 or not all(re.fullmatch(r"\d+", p) for p in parts):
                    raise SpecParseError("edge needs 'source target label'", eline, "edge")
                triples.append(tuple(int(p) for p in parts))
            nline, names = get("names", required=False)
            name_tuple = tuple(names.split()) if names else None
            try:
                return SubshiftSpec.sofic(LabeledGraph(vertex_count, tuple(triples), name_tuple))
            except ValueError as exc:
                raise SpecParseError(str(exc), line, "edge") from None
        if kind == "bfree":
            wline, window = get("window")
            window = _parse_number(window, wline, "window")
            if "B" in fields:
                bline, btext = fields["B"]
                bname = "B"
            else:
                bline, btext = get("family")
                bname = "family"
            try:
                B = parse_family(btext)
                return SubshiftSpec.bfree(B, window)
            except ValueError as exc:
                raise SpecParseError(str(exc), bline, bname) from None
        if kind == "sturmian":
            aline, alpha = get("alpha")
            wline, window = get("window")
            rline, rho = get("rho", required=False)
            alpha = _parse_number(alpha, aline, "alpha")
            window = _parse_number(window, wline, "window")
            rho = _parse_number(rho, rline, "rho") if rho else 0
            try:
                return SubshiftSpec.sturmian(alpha, window, rho)
            except ValueError as exc:
                raise SpecParseError(str(exc), aline, "alpha") from None
    except TypeError as exc:
        raise SpecParseError(str(exc)) from None
    raise AssertionError(kind)


def load_spec(path: Union[str, Path]) -> SubshiftSpec:
    return parse_spec(Path(path).read_text())
