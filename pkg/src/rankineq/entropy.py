"""True Shannon entropies of finitely supported joint distributions.

Probabilities are exact rationals; the only inexact step is the final
logarithm, so marginal entropies are reliable to well under 1e-9.  The
module also provides the bridge from subspace assignments to
distributions: sampling a uniform point of GF(p)^d and evaluating every
subspace's basis functionals yields a joint distribution whose base-p
entropies coincide with the subspace ranks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable

from .expressions import RankExpression, desugar
from .subspace import SubspaceAssignment, UnboundVariableError


class UnknownNameError(KeyError):
    """No builtin distribution under the requested name."""


@dataclass(frozen=True)
class JointDistribution:
    """Finitely supported pmf over tuples of variable values."""

    variables: tuple[str, ...]
    atoms: tuple[tuple[tuple, Fraction], ...]
    log_base: float | None = None  # default base for entropies; None = 2

    def __post_init__(self):
        total = Fraction(0)
        for value, prob in self.atoms:
            if len(value) != len(self.variables):
                raise ValueError(f"atom {value} has arity {len(value)}, "
                                 f"expected {len(self.variables)}")
            if prob <= 0:
                raise ValueError(f"atom {value} has nonpositive probability")
            total += prob
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def indices(self, subset: Iterable[str]) -> list[int]:
        wanted = set(subset)
        for name in wanted:
            if name not in self.variables:
                raise UnboundVariableError(name)
        return [i for i, name in enumerate(self.variables) if name in wanted]

    def marginal(self, subset: Iterable[str]) -> dict[tuple, Fraction]:
        idx = self.indices(subset)
        out: dict[tuple, Fraction] = {}
        for value, prob in self.atoms:
            key = tuple(value[i] for i in idx)
            out[key] = out.get(key, Fraction(0)) + prob
        return out


def entropy(dist: JointDistribution, subset: Iterable[str],
            base: float | None = None) -> float:
    """Marginal Shannon entropy of the named variables; H of nothing is 0."""
    subset = set(subset)
    if not subset:
        return 0.0
    base = base if base is not None else (dist.log_base or 2)
    if base <= 1:
        raise ValueError(f"log base must exceed 1, got {base}")
    log_base = math.log(base)
    total = 0.0
    for prob in dist.marginal(subset).values():
        logp = math.log2(float(prob)) if base == 2 else \
            (math.log(prob.numerator) - math.log(prob.denominator)) / log_base
        total -= float(prob) * logp
    return total


def evaluate_on_distribution(expr: RankExpression, dist: JointDistribution,
                             base: float | None = None) -> float:
    """Residual of the expression with H read as true Shannon entropy."""
    total = 0.0
    for term in desugar(expr).terms:
        total += float(term.coeff) * entropy(dist, term.s, base)
    return total


BUILTIN_DISTRIBUTIONS = ("ingleton-4atom",)


def builtin_distribution(name: str) -> JointDistribution:
    """The four-atom binary distribution on (A,B,C,D) violating Ingleton."""
    if name == "ingleton-4atom":
        quarter = Fraction(1, 4)
        atoms = tuple((tuple(int(c) for c in bits), quarter)
                      for bits in ("0000", "1111", "0101", "0110"))
        return JointDistribution(("A", "B", "C", "D"), atoms, log_base=2)
    raise UnknownNameError(
        f"unknown distribution {name!r}; known: {', '.join(BUILTIN_DISTRIBUTIONS)}")


def induce_distribution(ctx: SubspaceAssignment) -> JointDistribution:
    """Uniform-point functional evaluation of a subspace assignment.

    Draw u uniformly from GF(p)^d; the value of a variable with basis rows
    v1..vr is the tuple (u.v1, ..., u.vr).  The result has p^d equiprobable
    atoms and, in base p, every joint entropy equals the joint rank.
    """
    field, d = ctx.field, ctx.ambient_dim
    p = field.p
    names = tuple(ctx.bindings)
    bases = [ctx.bindings[n].basis_rows() for n in names]
    prob = Fraction(1, p ** d)
    atoms = []
    for u in product(range(p), repeat=d):
        value = tuple(
            tuple(sum(u[i] * row[i] for i in range(d)) % p for row in rows)
            for rows in bases)
        atoms.append((value, prob))
    return JointDistribution(names, tuple(atoms), log_base=p)


# --- distribution text format ----------------------------------------------
#
#   vars A,B,C,D
#   atom 0,0,0,0 : 1/4

def parse_distribution(text: str) -> JointDistribution:
    variables: tuple[str, ...] = ()
    atoms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars"):
            variables = tuple(v.strip() for v in line[len("vars"):].split(","))
        elif line.startswith("atom"):
            try:
                value_part, prob_part = line[len("atom"):].split(":")
                value = tuple(int(v) for v in value_part.split(","))
                prob = Fraction(prob_part.strip())
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            atoms.append((value, prob))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    return JointDistribution(variables, tuple(atoms))


def format_distribution(dist: JointDistribution) -> str:
    lines = ["vars " + ",".join(dist.variables)]
    for value, prob in dist.atoms:
        lines.append("atom " + ",".join(str(v) for v in value) + f" : {prob}")
    return "\n".join(lines) + "\n"
