"""Finite binary words and the coordinatewise order.

A :class:`Block` is stored packed: ``value`` holds the bits with the
leftmost symbol in the most significant position, so for blocks of equal
length numeric order on ``value`` coincides with lexicographic order on
the 0/1 string.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True, order=True, slots=True)
class Block:
    """Immutable binary word of positive length."""

    length: int
    value: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("empty blocks are not allowed")
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_str(cls, text: str) -> "Block":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a 0/1 word: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Block":
        value = 0
        length = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"symbol {b!r} is not 0 or 1")
            value = (value << 1) | int(b)
            length += 1
        return cls(length, value)

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b")

    def __repr__(self) -> str:
        return f"Block('{self}')"

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> (self.length - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.value >> (self.length - 1 - i)) & 1

    def __add__(self, other: "Block") -> "Block":
        return Block(self.length + other.length, (self.value << other.length) | other.value)

    @property
    def ones(self) -> int:
        return self.value.bit_count()

    def bits(self) -> tuple[int, ...]:
        return tuple(self)


def block(text: str) -> Block:
    """Shorthand for :meth:`Block.from_str`."""
    return Block.from_str(text)


def ones_count(w: Block) -> int:
    return w.value.bit_count()


def _check_same_length(w1: Block, w2: Block) -> None:
    if w1.length != w2.length:
        raise ValueError(f"length mismatch: {w1.length} != {w2.length}")


def dominates(w1: Block, w2: Block) -> bool:
    """True iff ``w1 >= w2`` coordinatewise."""
    _check_same_length(w1, w2)
    return w2.value & ~w1.value == 0


def subword(w: Block, i: int, j: int) -> Block:
    """Inclusive slice ``w[i..j]``."""
    if not 0 <= i <= j <= w.length - 1:
        raise IndexError(f"subword indices ({i}, {j}) out of range for length {w.length}")
    n = j - i + 1
    return Block(n, (w.value >> (w.length - 1 - j)) & ((1 << n) - 1))


def dominating_set(w: Block, candidates: Iterable[Block]) -> set[Block]:
    """Candidates ``c`` with ``c >= w``."""
    out = set()
    for c in candidates:
        if dominates(c, w):
            out.add(c)
    return out


def all_blocks(n: int) -> Iterator[Block]:
    """All ``2**n`` words of length ``n`` in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for v in range(1 << n):
        yield Block(n, v)


def submasks(value: int) -> Iterator[int]:
    """All bit patterns ``s`` with ``s & ~value == 0``, from ``value`` down to 0."""
    s = value
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & value


def below(w: Block) -> Iterator[Block]:
    """All blocks dominated by ``w`` (including ``w`` itself)."""
    for s in submasks(w.value):
        yield Block(w.length, s)


def contains(w: Block, pattern: Block) -> bool:
    """True iff ``pattern`` occurs in ``w`` as a contiguous subword."""
    m = pattern.length
    if m > w.length:
        return False
    mask = (1 << m) - 1
    v = w.value
    for shift in range(w.length - m + 1):
        if (v >> shift) & mask == pattern.value:
            return True
    return False


def factors(w: Block, n: int) -> Iterator[Block]:
    """Length-``n`` windows of ``w`` left to right (with repetition)."""
    for i in range(w.length - n + 1):
        yield subword(w, i, i + n - 1)


# numpy bridges for long generated windows

def to_array(w: Block) -> np.ndarray:
    """Symbols of ``w`` as a ``uint8`` numpy array."""
    nbytes = (w.length + 7) // 8
    raw = np.frombuffer(w.value.to_bytes(nbytes, "big"), dtype=np.uint8)
    bits = np.unpackbits(raw)
    return bits[bits.size - w.length:].copy()


def from_array(bits) -> Block:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 1 or bits.size == 0:
        raise ValueError("expected a non-empty 1-d 0/1 array")
    if bits.max(initial=0) > 1:
        raise ValueError("array contains symbols other than 0/1")
    pad = (-bits.size) % 8
    packed = np.packbits(np.concatenate([np.zeros(pad, np.uint8), bits]))
    return Block(int(bits.size), int.from_bytes(packed.tobytes(), "big"))


def window_codes(bits, n: int) -> np.ndarray:
    """Packed codes of all length-``n`` sliding windows of a 0/1 array."""
    bits = np.asarray(bits, dtype=np.int64)
    if not 1 <= n <= 62:
        raise ValueError("window length must be in 1..62")
    m = bits.size - n + 1
    if m < 1:
        raise ValueError(f"sequence of length {bits.size} is shorter than {n}")
    codes = np.zeros(m, dtype=np.int64)
    for j in range(n):
        codes = (codes << 1) | bits[j:j + m]
    return codes
