"""Counterexample search for rank inequalities over GF(p)^d.

Two strategies:

* ``RandomSearch`` draws every variable independently from the uniform
  subspace sampler, trial by trial.  Each trial has its own derived seed,
  so the first violating trial index is well defined no matter how the
  trial range is partitioned across workers.

* ``ExhaustiveOneDim`` enumerates, per variable, the zero subspace plus
  every 1-dimensional subspace of GF(p)^d ((p^d-1)/(p-1)+1 choices) in a
  fixed lexicographic order, with a sound branch-and-bound prune: open
  supports with positive coefficient are bounded below by the rank of
  their already-bound members, open supports with negative coefficient
  are bounded above by that rank plus one per unbound variable.  A full
  sweep over many variables is still astronomically large, so when more
  than ``max_free`` variables are free the searcher pins the members of
  the expression's independence-defect group to the coordinate axes (the
  reduced sweep); pass explicit ``fixed`` bindings to control this.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from threading import Lock
from typing import Optional, Sequence

from .expressions import JOINT, RankExpression, desugar, evaluate
from .gf import PrimeField
from .subspace import Subspace, SubspaceAssignment, random_assignment, span


class StrategyError(ValueError):
    """Unusable search configuration (budget, variable count, bindings)."""


@dataclass(frozen=True)
class RandomSearch:
    seed: int
    trials: int
    max_dim: int | None = None


@dataclass(frozen=True)
class ExhaustiveOneDim:
    fixed: tuple[tuple[str, Subspace], ...] = ()
    max_free: int = 4


def one_dim_candidates(field: PrimeField, ambient_dim: int) -> list[Subspace]:
    """Zero subspace, then all 1-dim subspaces by lexicographic representative.

    Each line is listed once, via the representative whose first nonzero
    coordinate is 1.
    """
    out = [Subspace.zero(field, ambient_dim)]
    for vec in product(range(field.p), repeat=ambient_dim):
        nz = next((c for c in vec if c), None)
        if nz == 1:
            out.append(span(field, ambient_dim, [vec]))
    return out


def _defect_group(expr: RankExpression) -> Optional[tuple[str, ...]]:
    """The one negative multi-variable joint support, if there is exactly one."""
    found = None
    for term in expr.terms:
        if term.kind == JOINT and len(term.s) >= 2 and term.coeff < 0:
            if found is not None and found != term.s:
                return None
            found = term.s
    if found is None:
        return None
    return tuple(v for v in expr.variables if v in found)


def _auto_fixed(expr: RankExpression, field: PrimeField, ambient_dim: int,
                max_free: int) -> dict[str, Subspace]:
    group = _defect_group(expr)
    if group is None or len(group) > ambient_dim:
        raise StrategyError(
            f"{len(expr.variables)} free variables is too many for the "
            f"exhaustive sweep (limit {max_free}); pass explicit fixed bindings")
    axes = {name: span(field, ambient_dim,
                       [[1 if j == i else 0 for j in range(ambient_dim)]])
            for i, name in enumerate(group)}
    if len(expr.variables) - len(axes) > max_free:
        raise StrategyError(
            "too many free variables even after pinning the independence "
            "group; pass explicit fixed bindings")
    return axes


class _Echelon:
    """Row echelon accumulator; shares row storage across search branches."""

    __slots__ = ("rows",)  # list of (pivot, row tuple), pivots increasing

    def __init__(self, rows=()):
        self.rows = list(rows)

    def added(self, vec: Sequence[int], p: int) -> "_Echelon":
        v = list(vec)
        for piv, row in self.rows:
            f = v[piv]
            if f:
                for j in range(piv, len(v)):
                    v[j] = (v[j] - f * row[j]) % p
        piv = next((j for j, c in enumerate(v) if c), None)
        if piv is None:
            return self
        inv = pow(v[piv], -1, p)
        if inv != 1:
            v = [(c * inv) % p for c in v]
        new = _Echelon(self.rows + [(piv, tuple(v))])
        new.rows.sort(key=lambda t: t[0])
        return new

    @property
    def rank(self) -> int:
        return len(self.rows)


def _search_exhaustive(expr: RankExpression, field: PrimeField,
                       ambient_dim: int, strategy: ExhaustiveOneDim
                       ) -> Optional[SubspaceAssignment]:
    p = field.p
    fixed = dict(strategy.fixed)
    for name, sub in fixed.items():
        if name not in expr.variables:
            raise StrategyError(f"fixed binding {name!r} is not a variable of "
                                f"{expr.name}")
        if sub.field != field or sub.ambient_dim != ambient_dim:
            raise StrategyError(f"fixed binding {name!r} lives in the wrong space")
    free = [v for v in expr.variables if v not in fixed]
    if len(free) > strategy.max_free:
        if fixed:
            raise StrategyError(
                f"{len(free)} free variables exceeds the sweep limit "
                f"{strategy.max_free}")
        fixed = _auto_fixed(expr, field, ambient_dim, strategy.max_free)
        free = [v for v in expr.variables if v not in fixed]

    des = desugar(expr)
    # plain ints where possible: the bound is recomputed at every node
    coeffs = [int(t.coeff) if t.coeff.denominator == 1 else t.coeff
              for t in des.terms]
    supports = [t.s for t in des.terms]
    nsup = len(supports)

    ech = []
    for s in supports:
        e = _Echelon()
        for name, sub in fixed.items():
            if name in s:
                for row in sub.basis_rows():
                    e = e.added(row, p)
        ech.append(e)
    unbound = [sum(1 for v in free if v in s) for s in supports]
    touching = [[i for i in range(nsup) if v in supports[i]] for v in free]

    candidates = one_dim_candidates(field, ambient_dim)
    cand_vecs = [c.basis_rows()[0] if c.dim else None for c in candidates]

    def lower_bound(ech, unbound):
        total = 0
        for i in range(nsup):
            r = len(ech[i].rows)
            c = coeffs[i]
            if c > 0:
                total += c * r
            else:
                total += c * min(ambient_dim, r + unbound[i])
        return total

    chosen: list[Subspace] = []

    def dfs(level: int, ech, unbound) -> bool:
        if lower_bound(ech, unbound) >= 0:
            return False
        if level == len(free):
            return True  # exact residual is negative
        for ci, cand in enumerate(candidates):
            vec = cand_vecs[ci]
            new_ech = list(ech)
            new_unbound = list(unbound)
            for i in touching[level]:
                new_unbound[i] -= 1
                if vec is not None:
                    new_ech[i] = new_ech[i].added(vec, p)
            chosen.append(cand)
            if dfs(level + 1, new_ech, new_unbound):
                return True
            chosen.pop()
        return False

    if dfs(0, ech, unbound):
        bindings = dict(fixed)
        bindings.update(zip(free, chosen))
        found = SubspaceAssignment(field, ambient_dim, bindings)
        assert evaluate(expr, found) < 0
        return found
    return None


def _search_random(expr: RankExpression, field: PrimeField, ambient_dim: int,
                   strategy: RandomSearch, workers: int
                   ) -> Optional[SubspaceAssignment]:
    if strategy.trials < 0:
        raise StrategyError("negative trial count")
    base = random.Random(strategy.seed)
    trial_seeds = [base.getrandbits(64) for _ in range(strategy.trials)]
    names = expr.variables

    def try_one(i: int) -> Optional[SubspaceAssignment]:
        rng = random.Random(trial_seeds[i])
        ctx = random_assignment(rng, field, ambient_dim, names,
                                max_dim=strategy.max_dim)
        return ctx if evaluate(expr, ctx) < 0 else None

    if workers <= 1 or strategy.trials < 2:
        for i in range(strategy.trials):
            hit = try_one(i)
            if hit is not None:
                return hit
        return None

    # Partition the index range; the winner is the lowest violating index,
    # so the result is independent of scheduling.
    lock = Lock()
    best: dict[str, object] = {"index": None, "ctx": None}
    step = -(-strategy.trials // workers)
    ranges = [(lo, min(lo + step, strategy.trials))
              for lo in range(0, strategy.trials, step)]

    def scan(lo: int, hi: int):
        for i in range(lo, hi):
            with lock:
                b = best["index"]
                if b is not None and b < i:
                    return
            hit = try_one(i)
            if hit is not None:
                with lock:
                    if best["index"] is None or i < best["index"]:
                        best["index"], best["ctx"] = i, hit
                return

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda r: scan(*r), ranges))
    return best["ctx"]  # type: ignore[return-value]


def search_violation(expr: RankExpression, field: PrimeField, ambient_dim: int,
                     strategy: RandomSearch | ExhaustiveOneDim,
                     workers: int = 1) -> Optional[SubspaceAssignment]:
    """First assignment (in strategy order) with a negative residual, or None."""
    if isinstance(strategy, ExhaustiveOneDim):
        return _search_exhaustive(expr, field, ambient_dim, strategy)
    if isinstance(strategy, RandomSearch):
        return _search_random(expr, field, ambient_dim, strategy, workers)
    raise StrategyError(f"unknown strategy {strategy!r}")
