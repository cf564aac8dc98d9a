"""Generators for the standard permutation families.

Random permutations use SplitMix64 driving a Fisher-Yates shuffle, with
rejection sampling for unbiased bounded draws, so a seed gives the same
permutation in any implementation of the same procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import Permutation, PopsError, validate_permutation

PRNG_NAME = "splitmix64/fisher-yates-descending"

_MASK64 = (1 << 64) - 1

KINDS = ("identity", "reversal", "random", "cyclic", "hypercube", "mesh", "bpc")

_MESH_DIRECTIONS = {
    "column": {"up": 1, "down": -1},
    "row": {"right": 1, "left": -1},
}


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejecting the biased tail."""
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next()
            if x < limit:
                return x % bound


def random_permutation(n: int, seed: int) -> Permutation:
    rng = SplitMix64(seed)
    image = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        image[i], image[j] = image[j], image[i]
    return Permutation(tuple(image))


def log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise PopsError(f"n={n} is not a power of two")
    return n.bit_length() - 1


def bpc_image(i: int, sigma: Sequence[int], mask: int) -> int:
    """Output bit j takes input bit sigma[j]; then the mask bits are complemented."""
    out = 0
    for j, src in enumerate(sigma):
        out |= ((i >> src) & 1) << j
    return out ^ mask


def _check_sigma(sigma: Sequence[int], k: int) -> None:
    if sorted(sigma) != list(range(k)):
        raise PopsError(f"sigma {list(sigma)} is not a permutation of 0..{k - 1}")


@dataclass(frozen=True)
class PermSpec:
    kind: str
    n: int
    seed: int = 0
    offset: int = 1
    b: int = 0
    N: int | None = None
    axis: str = "column"
    direction: str = "up"
    sigma: tuple[int, ...] | None = None
    mask: int = 0

    def describe(self) -> dict:
        out: dict = {"kind": self.kind, "n": self.n}
        if self.kind == "random":
            out.update(seed=self.seed, prng=PRNG_NAME)
        elif self.kind == "cyclic":
            out["offset"] = self.offset
        elif self.kind == "hypercube":
            out["b"] = self.b
        elif self.kind == "mesh":
            out.update(N=self.N, axis=self.axis, direction=self.direction)
        elif self.kind == "bpc":
            out.update(sigma=list(self.sigma) if self.sigma is not None else None, mask=self.mask)
        return out


def generate(spec: PermSpec) -> Permutation:
    n = spec.n
    if n < 1:
        raise PopsError(f"n must be positive, got {n}")
    kind = spec.kind
    if kind == "identity":
        image = list(range(n))
    elif kind == "reversal":
        image = [n - 1 - i for i in range(n)]
    elif kind == "random":
        return random_permutation(n, spec.seed)
    elif kind == "cyclic":
        image = [(i + spec.offset) % n for i in range(n)]
    elif kind == "hypercube":
        k = log2_exact(n)
        if not 0 <= spec.b < k:
            raise PopsError(f"bit b={spec.b} out of range 0..{k - 1} for n={n}")
        image = [i ^ (1 << spec.b) for i in range(n)]
    elif kind == "mesh":
        image = _mesh_shift(n, spec.N, spec.axis, spec.direction)
    elif kind == "bpc":
        k = log2_exact(n)
        sigma = tuple(range(k)) if spec.sigma is None else tuple(spec.sigma)
        _check_sigma(sigma, k)
        if not 0 <= spec.mask < n:
            raise PopsError(f"mask {spec.mask} has bits beyond the {k} index bits")
        image = [bpc_image(i, sigma, spec.mask) for i in range(n)]
    else:
        raise PopsError(f"unknown permutation kind {kind!r}; expected one of {', '.join(KINDS)}")
    return validate_permutation(image, n)


def _mesh_shift(n: int, N: int | None, axis: str, direction: str) -> list[int]:
    if N is None:
        N = round(n ** 0.5)
    if N < 1 or N * N != n:
        raise PopsError(f"mesh shift needs n = N*N, got n={n}, N={N}")
    try:
        step = _MESH_DIRECTIONS[axis][direction]
    except KeyError:
        raise PopsError(f"bad mesh move axis={axis!r} direction={direction!r}") from None
    image = []
    for x in range(n):
        i, j = x % N, x // N
        if axis == "column":
            i = (i + step) % N
        else:
            j = (j + step) % N
        image.append(i + j * N)
    return image


def recover_bpc(pi: Permutation) -> tuple[tuple[int, ...], int] | None:
    """(sigma, mask) with generate(bpc(sigma, mask)) == pi, or None if pi is not BPC."""
    n = pi.n
    k = log2_exact(n)
    mask = pi.image[0]
    sigma = [-1] * k
    for j in range(k):
        moved = pi.image[1 << j] ^ mask
        if moved == 0 or moved & (moved - 1):
            return None
        p = moved.bit_length() - 1
        if sigma[p] != -1:
            return None
        sigma[p] = j
    if any(bpc_image(i, sigma, mask) != pi.image[i] for i in range(n)):
        return None
    return tuple(sigma), mask


def is_bpc_closed_check(p1: Permutation, p2: Permutation) -> Permutation:
    """Compose two BPC permutations (p1 after p2) and confirm the result is BPC."""
    if p1.n != p2.n:
        raise PopsError(f"size mismatch: {p1.n} vs {p2.n}")
    composed = p1.compose(p2)
    recovered = recover_bpc(composed)
    if recovered is None:
        raise AssertionError("composition of BPC permutations is not BPC")
    sigma, mask = recovered
    again = generate(PermSpec("bpc", composed.n, sigma=sigma, mask=mask))
    if again != composed:
        raise AssertionError("recovered BPC spec does not reproduce the composition")
    return composed
