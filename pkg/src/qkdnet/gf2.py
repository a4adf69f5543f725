"""GF(2) linear algebra on int bitsets.

Vectors are Python ints; bit i is coordinate i.  A basis is kept in
row-echelon form as a dict keyed by leading-bit position, which makes both
insertion and membership tests a handful of XORs.
"""

from __future__ import annotations

from typing import Iterable


def new_basis() -> dict[int, int]:
    return {}


def insert(basis: dict[int, int], vec: int) -> bool:
    """Add vec to the basis; returns True if it was independent."""
    while vec:
        lead = vec.bit_length() - 1
        row = basis.get(lead)
        if row is None:
            basis[lead] = vec
            return True
        vec ^= row
    return False


def in_span(basis: dict[int, int], vec: int) -> bool:
    while vec:
        lead = vec.bit_length() - 1
        row = basis.get(lead)
        if row is None:
            return False
        vec ^= row
    return True


def span_basis(vectors: Iterable[int]) -> dict[int, int]:
    basis = new_basis()
    for v in vectors:
        insert(basis, v)
    return basis


def rank(vectors: Iterable[int]) -> int:
    return len(span_basis(vectors))
