"""POPS(d, g) network structure and the permutation routing instance.

Processors are numbered ``0..n-1`` and split into ``g`` groups of ``d``
consecutive processors. Coupler ``c(b, a)`` carries one packet per slot
from group ``a`` to group ``b``; it is written ``Coupler(dst_group=b,
src_group=a)`` here, always in that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class PopsError(ValueError):
    """Base class for invalid input to any popsroute operation."""


class IndexRangeError(PopsError, IndexError):
    pass


class InvalidPermutation(PopsError):
    def __init__(self, message: str, value: int | None = None, position: int | None = None):
        super().__init__(message)
        self.value = value
        self.position = position


@dataclass(frozen=True)
class NetworkConfig:
    """A POPS(d, g) network: ``g`` groups of ``d`` processors each."""

    d: int
    g: int

    def __post_init__(self) -> None:
        for name in ("d", "g"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise PopsError(f"{name} must be a positive integer, got {value!r}")

    @property
    def n(self) -> int:
        return self.d * self.g

    @property
    def couplers(self) -> int:
        return self.g * self.g

    def theorem_slots(self) -> int:
        """Worst-case optimal slot count: 1 if d == 1 else 2 * ceil(d / g)."""
        if self.d == 1:
            return 1
        return 2 * ceil_div(self.d, self.g)

    def __str__(self) -> str:
        return f"POPS({self.d},{self.g})"


class Coupler(NamedTuple):
    dst_group: int
    src_group: int


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _check_processor(cfg: NetworkConfig, i: int) -> None:
    if not 0 <= i < cfg.n:
        raise IndexRangeError(f"processor index {i} out of range for {cfg} (n={cfg.n})")


def group_of(cfg: NetworkConfig, i: int) -> int:
    _check_processor(cfg, i)
    return i // cfg.d


def local_index(cfg: NetworkConfig, i: int) -> int:
    _check_processor(cfg, i)
    return i % cfg.d


def processor_at(cfg: NetworkConfig, group: int, local: int) -> int:
    if not 0 <= group < cfg.g:
        raise IndexRangeError(f"group index {group} out of range for {cfg}")
    if not 0 <= local < cfg.d:
        raise IndexRangeError(f"local index {local} out of range for {cfg}")
    return local + group * cfg.d


def check_coupler(cfg: NetworkConfig, coupler: Coupler) -> None:
    for part in coupler:
        if not 0 <= part < cfg.g:
            raise IndexRangeError(f"coupler {tuple(coupler)} out of range for {cfg}")


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``0..n-1``; ``image[i]`` is the destination of packet ``i``."""

    image: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __len__(self) -> int:
        return len(self.image)

    def inverse(self) -> Permutation:
        inv = [0] * len(self.image)
        for i, v in enumerate(self.image):
            inv[v] = i
        return Permutation(tuple(inv))

    def compose(self, other: Permutation) -> Permutation:
        """Return ``self o other``, i.e. ``i -> self(other(i))``."""
        if other.n != self.n:
            raise PopsError(f"cannot compose permutations of size {self.n} and {other.n}")
        return Permutation(tuple(self.image[j] for j in other.image))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))


def validate_permutation(raw: Sequence[int], n: int) -> Permutation:
    """Check that ``raw`` is a bijection on ``0..n-1`` and wrap it.

    Raises InvalidPermutation naming the first offending entry.
    """
    values = list(raw)
    if len(values) != n:
        raise InvalidPermutation(f"expected {n} entries, got {len(values)}")
    seen = [False] * n
    for pos, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, int):
            raise InvalidPermutation(f"entry {pos} is not an integer: {v!r}", position=pos)
        if not 0 <= v < n:
            raise InvalidPermutation(f"value {v} at position {pos} out of range 0..{n - 1}",
                                     value=v, position=pos)
        if seen[v]:
            raise InvalidPermutation(f"duplicate value {v} at position {pos}", value=v, position=pos)
        seen[v] = True
    return Permutation(tuple(values))


def parse_permutation_text(text: str) -> list[int]:
    """Parse a permutation file: a JSON array or whitespace-separated integers."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidPermutation(f"malformed JSON permutation: {exc}") from None
        if not isinstance(data, list):
            raise InvalidPermutation("JSON permutation must be an array")
        return data
    try:
        return [int(tok) for tok in stripped.split()]
    except ValueError as exc:
        raise InvalidPermutation(f"non-integer token in permutation file: {exc}") from None


def format_permutation(pi: Permutation | Iterable[int]) -> str:
    image = pi.image if isinstance(pi, Permutation) else tuple(pi)
    return " ".join(str(v) for v in image) + "\n"
