"""Vector matroids of matrices over GF(p).

The ground set indexes the matrix columns; a subset is independent when
the corresponding column multiset is linearly independent.  Bases and
circuits are enumerated by brute force over the power set, which is
plenty for the ground sets handled here (at most 8 elements for the
built-ins, hard limit 20).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .gf import Matrix, PrimeField, _rref_rows


class UnknownLabelError(KeyError):
    """Subset contains a label outside the ground set."""


class SizeLimitError(ValueError):
    """Ground set too large for exhaustive enumeration."""


ENUMERATION_LIMIT = 20

# 0/1 integer matrix whose column dependencies over characteristic 3 realize
# the rank-4 matroid on {A,B,C,D,W,X,Y,Z}; over any other characteristic the
# dependency structure is the variant with {W,X,Y,Z} independent.
_T8_COLUMNS = {
    "A": (1, 0, 0, 0),
    "B": (0, 1, 0, 0),
    "C": (0, 0, 1, 0),
    "D": (0, 0, 0, 1),
    "W": (0, 1, 1, 1),
    "X": (1, 0, 1, 1),
    "Y": (1, 1, 0, 1),
    "Z": (1, 1, 1, 0),
}
_T8_GROUND = ("A", "B", "C", "D", "W", "X", "Y", "Z")

_EXAMPLE_2X5_ROWS = ((1, 0, 0, 1, 1),
                     (0, 1, 0, 0, 1))
_EXAMPLE_2X5_GROUND = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class VectorMatroid:
    ground: tuple[str, ...]
    representation: Matrix  # columns indexed by ground, in order

    def __post_init__(self):
        if len(self.ground) != self.representation.cols:
            raise ValueError("ground set size differs from column count")
        if len(set(self.ground)) != len(self.ground):
            raise ValueError("duplicate ground set labels")

    @property
    def field(self) -> PrimeField:
        return self.representation.field

    def _columns(self, subset: Iterable[str]) -> list[list[int]]:
        index = {label: i for i, label in enumerate(self.ground)}
        cols = []
        for label in subset:
            if label not in index:
                raise UnknownLabelError(label)
            j = index[label]
            cols.append([self.representation.entry(i, j)
                         for i in range(self.representation.rows)])
        return cols

    def rank(self, subset: Iterable[str]) -> int:
        """r(X): rank of the column multiset indexed by X."""
        cols = self._columns(subset)
        _, pivots = _rref_rows(cols, self.representation.rows, self.field.p)
        return len(pivots)

    def is_independent(self, subset: Iterable[str]) -> bool:
        subset = list(subset)
        return self.rank(subset) == len(subset)

    def _check_enumerable(self):
        if len(self.ground) > ENUMERATION_LIMIT:
            raise SizeLimitError(
                f"ground set of {len(self.ground)} exceeds the enumeration "
                f"limit {ENUMERATION_LIMIT}")

    def independent_sets(self) -> set[frozenset[str]]:
        self._check_enumerable()
        out = set()
        for r in range(len(self.ground) + 1):
            for combo in combinations(self.ground, r):
                if self.is_independent(combo):
                    out.add(frozenset(combo))
        return out

    def bases(self) -> set[frozenset[str]]:
        """Maximal independent sets; all share cardinality r(E)."""
        self._check_enumerable()
        r = self.rank(self.ground)
        return {frozenset(combo)
                for combo in combinations(self.ground, r)
                if self.is_independent(combo)}

    def circuits(self) -> set[frozenset[str]]:
        """Minimal dependent sets."""
        self._check_enumerable()
        out = set()
        for r in range(1, len(self.ground) + 1):
            for combo in combinations(self.ground, r):
                if self.is_independent(combo):
                    continue
                if all(self.is_independent(combo[:i] + combo[i + 1:])
                       for i in range(len(combo))):
                    out.add(frozenset(combo))
        return out


def matroid_rank(m: VectorMatroid, subset: Iterable[str]) -> int:
    return m.rank(subset)


def is_independent(m: VectorMatroid, subset: Iterable[str]) -> bool:
    return m.is_independent(subset)


def bases(m: VectorMatroid) -> set[frozenset[str]]:
    return m.bases()


def circuits(m: VectorMatroid) -> set[frozenset[str]]:
    return m.circuits()


BUILTIN_MATROIDS = ("t8", "t8-example-2x5")


def builtin_matroid(name: str, p: int) -> VectorMatroid:
    field = PrimeField(p)
    if name == "t8":
        rows = [[_T8_COLUMNS[label][i] for label in _T8_GROUND] for i in range(4)]
        return VectorMatroid(_T8_GROUND, Matrix.from_rows(field, rows))
    if name == "t8-example-2x5":
        return VectorMatroid(_EXAMPLE_2X5_GROUND,
                             Matrix.from_rows(field, _EXAMPLE_2X5_ROWS))
    raise UnknownLabelError(
        f"unknown matroid {name!r}; known: {', '.join(BUILTIN_MATROIDS)}")


def check_independence_axioms(ground: Sequence[str],
                              independents: set[frozenset[str]]) -> list[str]:
    """Exhaustive check of the independence axioms; returns violations.

    (I1) the empty set is independent; (I2) subsets of independent sets are
    independent; (I3) a larger independent set can always extend a smaller
    one by a single element.
    """
    violations = []
    if frozenset() not in independents:
        violations.append("I1: empty set not independent")
    for b in independents:
        for e in b:
            if b - {e} not in independents:
                violations.append(f"I2: {sorted(b - {e})} missing under {sorted(b)}")
    for a in independents:
        for b in independents:
            if len(a) <= len(b):
                continue
            if not any(b | {u} in independents for u in a - b):
                violations.append(f"I3: {sorted(b)} cannot extend from {sorted(a)}")
    return violations


def matroid_report(m: VectorMatroid) -> dict:
    """Report data for the CLI: ground, rank, base count, sorted circuits."""
    circs = sorted(sorted(c) for c in m.circuits())
    return {
        "ground": list(m.ground),
        "rank": m.rank(m.ground),
        "base_count": len(m.bases()),
        "circuits": circs,
    }
