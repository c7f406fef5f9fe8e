"""Mixed-modulus commutative groups Z^a x Z/n1 x ... x Z/nk.

A group is described by its list of moduli; modulus 0 stands for an
infinite cyclic coordinate.  Elements are plain tuples of Python ints in
canonical form (finite coordinates reduced into [0, n)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


class GroupMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(n) for n in self.moduli)
        if not moduli:
            raise ValueError("a group needs at least one coordinate")
        for n in moduli:
            if n < 0 or n == 1:
                raise ValueError(f"invalid modulus {n}: use 0 for Z or n >= 2")
        object.__setattr__(self, "moduli", moduli)

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``#group n1 n2 ...`` (the ``#group`` prefix is optional)."""
        tokens = text.split()
        if tokens and tokens[0] == "#group":
            tokens = tokens[1:]
        try:
            return cls(tuple(int(t) for t in tokens))
        except ValueError as exc:
            raise ValueError(f"bad group directive {text!r}: {exc}") from None

    @classmethod
    def integers(cls, dim: int = 1) -> "GroupSpec":
        return cls((0,) * dim)

    @classmethod
    def cyclic(cls, n: int, dim: int = 1) -> "GroupSpec":
        return cls((n,) * dim)

    @property
    def dim(self) -> int:
        return len(self.moduli)

    @property
    def is_finite(self) -> bool:
        return all(n > 0 for n in self.moduli)

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        out = 1
        for n in self.moduli:
            out *= n
        return out

    def directive(self) -> str:
        return "#group " + " ".join(str(n) for n in self.moduli)

    def canonical(self, coords: Iterable[int]) -> tuple[int, ...]:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.dim:
            raise GroupMismatchError(
                f"element has {len(coords)} coordinates, group has {self.dim}"
            )
        out = tuple(c % n if n else c for c, n in zip(coords, self.moduli))
        for c in out:
            if not INT64_MIN <= c <= INT64_MAX:
                raise OverflowError(f"coordinate {c} does not fit in 64 bits")
        return out

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim


@dataclass(frozen=True, order=False)
class Element:
    """A canonical group element bound to its group."""

    coords: tuple[int, ...]
    group: GroupSpec

    def __post_init__(self):
        object.__setattr__(self, "coords", self.group.canonical(self.coords))

    def __add__(self, other: "Element") -> "Element":
        return Element(add_canonical(self.coords, other.coords, self.group), self.group)

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.coords)


def _coords(x) -> tuple[int, ...]:
    return x.coords if isinstance(x, Element) else tuple(x)


def add_canonical(a, b, group: GroupSpec) -> tuple[int, ...]:
    a, b = _coords(a), _coords(b)
    if len(a) != group.dim or len(b) != group.dim:
        raise GroupMismatchError(
            f"dimension mismatch: {len(a)}, {len(b)} vs group dimension {group.dim}"
        )
    return group.canonical(x + y for x, y in zip(a, b))


def lex_compare(a, b) -> int:
    """Return -1, 0 or 1 comparing canonical coordinates lexicographically."""
    a, b = _coords(a), _coords(b)
    if len(a) != len(b):
        raise GroupMismatchError(f"cannot compare {len(a)}- and {len(b)}-dimensional elements")
    if a == b:
        return 0
    return -1 if a < b else 1


def parse_element(line: str, group: GroupSpec) -> tuple[int, ...]:
    return group.canonical(int(t) for t in line.split())


def format_element(coords: Sequence[int]) -> str:
    return " ".join(str(c) for c in coords)
