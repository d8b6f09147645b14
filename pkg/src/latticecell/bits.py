"""Helpers for int-as-bitset vectors.

Bit vectors throughout the package are plain Python ints: bit i set means
element i is in the set. Ints are immutable, hashable, and their bitwise
ops run at C speed, which is what the derivation operators and the engine
transition functions lean on.
"""

from collections.abc import Iterable


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def bit_indices(mask: int) -> tuple[int, ...]:
    """Set bit positions of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def iter_bits(mask: int):
    """Yield set bit positions of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def bits_to_list(mask: int, size: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(size)]


def list_to_bits(bits: Iterable[int]) -> int:
    mask = 0
    for i, bit in enumerate(bits):
        if bit:
            mask |= 1 << i
    return mask
