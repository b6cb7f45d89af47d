"""Finite atomic probability spaces and random variables over them.

Everything is exact: probabilities and values are ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction, str]


def as_fraction(value: Rational) -> Fraction:
    """Convert ``value`` to a Fraction, refusing floats.

    Strings may be ``"p/q"``, integers or finite decimals (``"0.25"``).
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


class SpaceMismatchError(ValueError):
    """Two random variables (or a variable and a cone) live on different spaces."""


@dataclass(frozen=True)
class FiniteProbSpace:
    atoms: tuple[str, ...]
    probs: tuple[Fraction, ...]

    def __init__(self, atoms: Iterable, probs: Iterable[Rational]):
        atoms = tuple(str(a) for a in atoms)
        probs = tuple(as_fraction(p) for p in probs)
        if len(atoms) != len(probs):
            raise ValueError(f"{len(atoms)} atoms but {len(probs)} probabilities")
        if not atoms:
            raise ValueError("a probability space needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise ValueError("atom labels must be unique")
        for a, p in zip(atoms, probs):
            if p <= 0:
                raise ValueError(f"atom {a!r} has nonpositive probability {p}")
        total = sum(probs)
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, n: int, prefix: str = "w") -> FiniteProbSpace:
        return cls([f"{prefix}{i}" for i in range(n)], [Fraction(1, n)] * n)

    def __len__(self) -> int:
        return len(self.atoms)

    def index(self, label: str) -> int:
        return self.atoms.index(label)

    def rv(self, values: Iterable[Rational]) -> RandomVariable:
        return RandomVariable(self, values)

    def constant(self, c: Rational) -> RandomVariable:
        return RandomVariable(self, [c] * len(self))

    def indicator(self, indices: Iterable[int]) -> RandomVariable:
        idx = set(indices)
        return RandomVariable(self, [1 if i in idx else 0 for i in range(len(self))])

    def prob(self, indices: Iterable[int]) -> Fraction:
        return sum((self.probs[i] for i in set(indices)), Fraction(0))


@dataclass(frozen=True, eq=False)
class RandomVariable:
    """A vector of exact values indexed by the atoms of ``space``."""

    space: FiniteProbSpace
    values: tuple[Fraction, ...]

    def __init__(self, space: FiniteProbSpace, values: Iterable[Rational]):
        values = tuple(as_fraction(v) for v in values)
        if len(values) != len(space):
            raise ValueError(f"expected {len(space)} values, got {len(values)}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RandomVariable):
            return NotImplemented
        return self.values == other.values and _same_space(self.space, other.space)

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"RandomVariable({[str(v) for v in self.values]})"

    def _check(self, other: RandomVariable) -> None:
        check_same_space(self, other)

    def __add__(self, other: RandomVariable) -> RandomVariable:
        self._check(other)
        return RandomVariable(self.space, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: RandomVariable) -> RandomVariable:
        self._check(other)
        return RandomVariable(self.space, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> RandomVariable:
        return RandomVariable(self.space, [-a for a in self.values])

    def __mul__(self, scalar: Rational) -> RandomVariable:
        if isinstance(scalar, RandomVariable):
            return NotImplemented
        c = as_fraction(scalar)
        return RandomVariable(self.space, [c * a for a in self.values])

    __rmul__ = __mul__

    def times(self, other: RandomVariable) -> RandomVariable:
        """Atomwise product."""
        self._check(other)
        return RandomVariable(self.space, [a * b for a, b in zip(self.values, other.values)])

    def abs(self) -> RandomVariable:
        return RandomVariable(self.space, [abs(a) for a in self.values])

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def dominates(self, other: RandomVariable) -> bool:
        """True iff ``self >= other`` atomwise."""
        self._check(other)
        return all(a >= b for a, b in zip(self.values, other.values))


@dataclass(frozen=True)
class AtomPartition:
    """Disjoint blocks of atom indices covering ``range(n_atoms)``."""

    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, blocks: Iterable[Iterable[int]], n_atoms: int):
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise ValueError("partition blocks must be nonempty")
            for i in b:
                if i in seen:
                    raise ValueError(f"atom {i} appears in more than one block")
                seen.add(i)
        if seen != set(range(n_atoms)):
            raise ValueError("partition blocks do not cover every atom exactly once")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def trivial(cls, n_atoms: int) -> AtomPartition:
        return cls([range(n_atoms)], n_atoms)

    @classmethod
    def singletons(cls, n_atoms: int) -> AtomPartition:
        return cls([[i] for i in range(n_atoms)], n_atoms)


def _same_space(a: FiniteProbSpace, b: FiniteProbSpace) -> bool:
    return a is b or a == b


def check_same_space(x: RandomVariable, y: RandomVariable) -> None:
    if not _same_space(x.space, y.space):
        raise SpaceMismatchError("random variables live on different probability spaces")


def expectation(x: RandomVariable) -> Fraction:
    return sum((p * v for p, v in zip(x.space.probs, x.values)), Fraction(0))


def pairing(x: RandomVariable, f: RandomVariable) -> Fraction:
    """The duality bracket <x, f> = E[x f]."""
    check_same_space(x, f)
    return sum((p * a * b for p, a, b in zip(x.space.probs, x.values, f.values)), Fraction(0))


def pos_neg_parts(x: RandomVariable) -> tuple[RandomVariable, RandomVariable]:
    pos = RandomVariable(x.space, [max(v, 0) for v in x.values])
    neg = RandomVariable(x.space, [max(-v, 0) for v in x.values])
    return pos, neg


def positive_part(x: RandomVariable) -> RandomVariable:
    return pos_neg_parts(x)[0]


def negative_part(x: RandomVariable) -> RandomVariable:
    return pos_neg_parts(x)[1]


def conditional_expectation(x: RandomVariable, part: AtomPartition) -> RandomVariable:
    """E[x | sigma(part)]: constant on each block, equal to the block average."""
    if sum(len(b) for b in part.blocks) != len(x):
        raise ValueError("partition does not match the space")
    out: list[Fraction] = [Fraction(0)] * len(x)
    probs = x.space.probs
    for block in part.blocks:
        mass = sum(probs[i] for i in block)
        avg = sum(probs[i] * x.values[i] for i in block) / mass
        for i in block:
            out[i] = avg
    return RandomVariable(x.space, out)


def tail_probability(x: RandomVariable, k: Rational) -> Fraction:
    """P(x >= k). Pass ``x.abs()`` or ``negative_part(x)`` for the usual tails."""
    k = as_fraction(k)
    return sum((p for p, v in zip(x.space.probs, x.values) if v >= k), Fraction(0))


def vectors_to_rvs(space: FiniteProbSpace, rows: Sequence[Sequence[Rational]]) -> list[RandomVariable]:
    return [RandomVariable(space, r) for r in rows]
