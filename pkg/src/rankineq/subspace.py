"""Canonical subspaces of GF(p)^d and entropy-style rank functionals.

A subspace is stored as the reduced row echelon basis of its span, so two
subspaces are equal iff their stored bases are identical.  On top of that
the usual information-theoretic notation is given rank semantics:

    H(S)     rank of the span of the subspaces named by S
    H(S|T)   H(S u T) - H(T)
    I(S;T)   H(S) + H(T) - H(S u T)   (= rank of the intersection for
                                        single subspaces)
    I(S;T|U) H(S|U) - H(S|T u U)

All values are small nonnegative integers and are computed exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .gf import FieldMismatchError, Matrix, PrimeField, ShapeError, _rref_rows


class UnboundVariableError(KeyError):
    """A rank functional referenced a name with no bound subspace."""


class NotASubspaceError(ValueError):
    """codim() was given a pair where `sub` is not contained in `parent`."""


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^ambient_dim held as a canonical RREF basis."""

    field: PrimeField
    ambient_dim: int
    basis: Matrix  # rows = basis vectors, in RREF, no zero rows

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise ShapeError("basis width differs from ambient dimension")

    @property
    def dim(self) -> int:
        return self.basis.rows

    @classmethod
    def zero(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return span(field, ambient_dim, [])

    @classmethod
    def full(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return span(field, ambient_dim,
                    [[1 if i == j else 0 for j in range(ambient_dim)]
                     for i in range(ambient_dim)])

    def basis_rows(self) -> list[list[int]]:
        return self.basis.row_list()

    def contains(self, other: "Subspace") -> bool:
        _check_compatible([self, other])
        rows = self.basis_rows() + other.basis_rows()
        _, pivots = _rref_rows(rows, self.ambient_dim, self.field.p)
        return len(pivots) == self.dim

    def __str__(self):
        vecs = "; ".join("(" + ",".join(str(e) for e in row) + ")"
                         for row in self.basis_rows())
        return "span{" + vecs + "}"


def _check_compatible(subspaces: Sequence[Subspace]):
    first = subspaces[0]
    for s in subspaces[1:]:
        if s.field != first.field or s.ambient_dim != first.ambient_dim:
            raise FieldMismatchError(
                "subspaces live in different ambient spaces: "
                f"{first.field}^{first.ambient_dim} vs {s.field}^{s.ambient_dim}")


def span(field: PrimeField, ambient_dim: int,
         vectors: Iterable[Sequence[int]]) -> Subspace:
    """Canonical subspace spanned by the given coordinate vectors."""
    rows = []
    for v in vectors:
        v = list(v)
        if len(v) != ambient_dim:
            raise ShapeError(
                f"vector {tuple(v)} has length {len(v)}, expected {ambient_dim}")
        rows.append(v)
    rows, _ = _rref_rows(rows, ambient_dim, field.p)
    rows = [r for r in rows if any(r)]
    return Subspace(field, ambient_dim, Matrix.from_rows(field, rows, cols=ambient_dim))


def join(subspaces: Sequence[Subspace]) -> Subspace:
    """Span of the union of the given subspaces."""
    if not subspaces:
        raise ValueError("join of an empty sequence is undefined; use Subspace.zero")
    _check_compatible(subspaces)
    first = subspaces[0]
    rows = [row for s in subspaces for row in s.basis_rows()]
    return span(first.field, first.ambient_dim, rows)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Exact intersection, via the kernel of the stacked-basis relation.

    A vector lies in both subspaces iff it is u.A_basis = v.B_basis for
    some coefficient rows u, v; those (u, v) form the kernel of the matrix
    whose columns are the A-basis vectors followed by the negated B-basis
    vectors.
    """
    _check_compatible([a, b])
    field, d = a.field, a.ambient_dim
    p = field.p
    arows = a.basis_rows()
    brows = b.basis_rows()
    if not arows or not brows:
        return Subspace.zero(field, d)
    # columns: a-basis vectors then negated b-basis vectors
    cols = len(arows) + len(brows)
    rel = [[0] * cols for _ in range(d)]
    for j, v in enumerate(arows):
        for i in range(d):
            rel[i][j] = v[i]
    for j, v in enumerate(brows):
        for i in range(d):
            rel[i][len(arows) + j] = (-v[i]) % p
    rel, pivots = _rref_rows(rel, cols, p)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    vectors = []
    for f in free:
        coeff = [0] * cols
        coeff[f] = 1
        for i, pc in enumerate(pivots):
            coeff[pc] = (-rel[i][f]) % p
        vec = [0] * d
        for j, v in enumerate(arows):
            if coeff[j]:
                for i in range(d):
                    vec[i] = (vec[i] + coeff[j] * v[i]) % p
        vectors.append(vec)
    result = span(field, d, vectors)
    # modular identity: dim(a^b) + dim(<a,b>) = dim a + dim b
    assert result.dim + join([a, b]).dim == a.dim + b.dim
    return result


def codim(parent: Subspace, sub: Subspace) -> int:
    """dim(parent) - dim(sub), insisting that sub really is inside parent."""
    if not parent.contains(sub):
        raise NotASubspaceError(f"{sub} is not a subspace of {parent}")
    return parent.dim - sub.dim


class SubspaceAssignment:
    """A binding of variable names to subspaces of one common GF(p)^d."""

    def __init__(self, field: PrimeField, ambient_dim: int,
                 bindings: Mapping[str, Subspace]):
        for name, s in bindings.items():
            if s.field != field or s.ambient_dim != ambient_dim:
                raise FieldMismatchError(
                    f"binding {name} lives in {s.field}^{s.ambient_dim}, "
                    f"assignment is over {field}^{ambient_dim}")
        self.field = field
        self.ambient_dim = ambient_dim
        self.bindings = dict(bindings)
        self._rank_cache: dict[frozenset, int] = {frozenset(): 0}

    def __eq__(self, other):
        return (isinstance(other, SubspaceAssignment)
                and self.field == other.field
                and self.ambient_dim == other.ambient_dim
                and self.bindings == other.bindings)

    def __repr__(self):
        names = ",".join(sorted(self.bindings))
        return f"SubspaceAssignment({self.field}^{self.ambient_dim}; {names})"

    def subspace(self, name: str) -> Subspace:
        try:
            return self.bindings[name]
        except KeyError:
            raise UnboundVariableError(name) from None

    def joint_rank(self, names: Iterable[str]) -> int:
        """H(S): dimension of the span of the named subspaces; H({}) = 0."""
        key = frozenset(names)
        cached = self._rank_cache.get(key)
        if cached is not None:
            return cached
        rows = [row for n in sorted(key) for row in self.subspace(n).basis_rows()]
        _, pivots = _rref_rows(rows, self.ambient_dim, self.field.p)
        value = len(pivots)
        self._rank_cache[key] = value
        return value

    def cond_rank(self, s: Iterable[str], t: Iterable[str]) -> int:
        """H(S|T) = H(S u T) - H(T)."""
        t = frozenset(t)
        return self.joint_rank(frozenset(s) | t) - self.joint_rank(t)

    def mutual_rank(self, s: Iterable[str], t: Iterable[str]) -> int:
        """I(S;T) = H(S) + H(T) - H(S u T)."""
        s, t = frozenset(s), frozenset(t)
        return self.joint_rank(s) + self.joint_rank(t) - self.joint_rank(s | t)

    def cond_mutual_rank(self, s: Iterable[str], t: Iterable[str],
                         given: Iterable[str]) -> int:
        """I(S;T|U) = H(S|U) - H(S|T u U)."""
        u = frozenset(given)
        return self.cond_rank(s, u) - self.cond_rank(s, frozenset(t) | u)


def random_subspace(rng: random.Random, field: PrimeField, ambient_dim: int,
                    max_dim: int | None = None) -> Subspace:
    """Sampled as the column span of a uniform d x dim matrix.

    dim is drawn uniformly from [0, min(max_dim, d)]; every dimension has
    positive probability of being hit.
    """
    hi = ambient_dim if max_dim is None else min(max_dim, ambient_dim)
    ncols = rng.randint(0, hi)
    columns = [[rng.randrange(field.p) for _ in range(ambient_dim)]
               for _ in range(ncols)]
    return span(field, ambient_dim, columns)


def random_assignment(rng: random.Random, field: PrimeField, ambient_dim: int,
                      names: Sequence[str],
                      max_dim: int | None = None) -> SubspaceAssignment:
    return SubspaceAssignment(
        field, ambient_dim,
        {n: random_subspace(rng, field, ambient_dim, max_dim) for n in names})


# --- assignment text format -------------------------------------------------
#
#   field 3
#   ambient 4
#   A = span{(1,0,0,0)}
#   Z = span{}
#
# Whitespace-insensitive; '#' starts a comment.

def parse_assignment(text: str) -> SubspaceAssignment:
    field = None
    ambient = None
    bindings: dict[str, Subspace] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        compact = line.replace(" ", "").replace("\t", "")
        if compact.startswith("field"):
            field = PrimeField(int(compact[len("field"):]))
        elif compact.startswith("ambient"):
            ambient = int(compact[len("ambient"):])
        elif "=" in compact:
            if field is None or ambient is None:
                raise ValueError(
                    f"line {lineno}: binding before 'field'/'ambient' headers")
            name, rhs = compact.split("=", 1)
            if not name.isidentifier():
                raise ValueError(f"line {lineno}: bad variable name {name!r}")
            if not (rhs.startswith("span{") and rhs.endswith("}")):
                raise ValueError(f"line {lineno}: expected span{{...}}, got {rhs!r}")
            body = rhs[len("span{"):-1]
            vectors = []
            if body:
                for chunk in body.split(";"):
                    if not (chunk.startswith("(") and chunk.endswith(")")):
                        raise ValueError(
                            f"line {lineno}: expected (c,...,c), got {chunk!r}")
                    vectors.append([int(c) for c in chunk[1:-1].split(",")])
            bindings[name] = span(field, ambient, vectors)
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if field is None or ambient is None:
        raise ValueError("missing 'field'/'ambient' headers")
    return SubspaceAssignment(field, ambient, bindings)


def format_assignment(ctx: SubspaceAssignment) -> str:
    lines = [f"field {ctx.field.p}", f"ambient {ctx.ambient_dim}"]
    for name in sorted(ctx.bindings):
        lines.append(f"{name} = {ctx.bindings[name]}")
    return "\n".join(lines) + "\n"
