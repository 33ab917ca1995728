import pytest

from rankineq.expressions import builtin, evaluate, joint, parse_expression
from rankineq.expressions import RankExpression
from rankineq.gf import PrimeField
from rankineq.search import (ExhaustiveOneDim, RandomSearch, StrategyError,
                             one_dim_candidates, search_violation)
from rankineq.subspace import span

from oracles import counterexample_assignment

GF2, GF3, GF5 = map(PrimeField, (2, 3, 5))


def test_one_dim_candidate_counts():
    # (p^d - 1)/(p - 1) lines plus the zero subspace
    assert len(one_dim_candidates(GF3, 4)) == 41
    assert len(one_dim_candidates(GF2, 4)) == 16
    assert len(one_dim_candidates(GF5, 2)) == 7
    dims = {c.dim for c in one_dim_candidates(GF3, 4)}
    assert dims == {0, 1}


def test_exhaustive_finds_t8_violation_over_gf3():
    found = search_violation(builtin("t8"), GF3, 4, ExhaustiveOneDim())
    assert found is not None
    assert evaluate(builtin("t8"), found) < 0
    # deterministic sweep order: the first violation is the known assignment
    assert found == counterexample_assignment(3)


def test_exhaustive_explicit_fixed_matches_auto():
    axes = tuple(
        (name, span(GF2, 4, [[1 if j == i else 0 for j in range(4)]]))
        for i, name in enumerate("ABCD"))
    expr = builtin("non-t8")
    fixed = search_violation(expr, GF2, 4, ExhaustiveOneDim(fixed=axes))
    auto = search_violation(expr, GF2, 4, ExhaustiveOneDim())
    assert fixed is not None and fixed == auto
    assert evaluate(expr, fixed) < 0


def test_exhaustive_reduced_sweep_finds_nothing_over_gf2():
    assert search_violation(builtin("t8"), GF2, 4, ExhaustiveOneDim()) is None


def test_random_t8_gf2_finds_nothing():
    got = search_violation(builtin("t8"), GF2, 4,
                           RandomSearch(seed=1, trials=2000, max_dim=4))
    assert got is None


def test_random_non_t8_gf3_finds_nothing():
    got = search_violation(builtin("non-t8"), GF3, 4,
                           RandomSearch(seed=1, trials=2000, max_dim=4))
    assert got is None


def test_random_ingleton_finds_nothing():
    got = search_violation(builtin("ingleton"), GF2, 4,
                           RandomSearch(seed=3, trials=500))
    assert got is None


def test_random_finds_planted_violation_deterministically():
    # -H(A) is violated by any nonzero A; the first violating trial index
    # must not depend on the worker count
    expr = RankExpression("neg", ("A",), (joint(-1, "A"),))
    runs = [search_violation(expr, GF3, 3, RandomSearch(seed=9, trials=50),
                             workers=w) for w in (1, 2, 5)]
    assert runs[0] is not None
    assert evaluate(expr, runs[0]) < 0
    assert runs[1] == runs[0] and runs[2] == runs[0]


def test_random_same_seed_same_result():
    expr = builtin("non-t8")
    a = search_violation(expr, GF5, 4, RandomSearch(seed=4, trials=300))
    b = search_violation(expr, GF5, 4, RandomSearch(seed=4, trials=300))
    assert a == b
    if a is not None:
        assert evaluate(expr, a) < 0


def test_found_violations_reverify():
    found = search_violation(builtin("non-t8"), GF2, 4, ExhaustiveOneDim())
    assert found is not None
    assert evaluate(builtin("non-t8"), found) < 0
    # the known violating assignment is itself reported violating
    assert evaluate(builtin("non-t8"), counterexample_assignment(5)) < 0


def test_auto_reduction_requires_defect_group():
    expr = parse_expression("H(A)+H(B)+H(C)+H(D)+H(E)")
    with pytest.raises(StrategyError):
        search_violation(expr, GF2, 4, ExhaustiveOneDim())


def test_max_free_override_allows_full_sweep():
    # five free variables, no independence group: raising max_free runs the
    # plain enumeration instead of erroring
    never = parse_expression("H(A)+H(B)+H(C)+H(D)+H(E)")
    assert search_violation(never, GF2, 2,
                            ExhaustiveOneDim(max_free=5)) is None
    always = parse_expression("- H(A) - H(B) - H(C) - H(D) - H(E)")
    found = search_violation(always, GF2, 2, ExhaustiveOneDim(max_free=5))
    assert found is not None and evaluate(always, found) < 0


def test_explicit_fixed_still_too_many():
    axes = (("A", span(GF2, 4, [(1, 0, 0, 0)])),)
    expr = parse_expression("H(A)+H(B)+H(C)+H(D)+H(E)+H(F)")
    with pytest.raises(StrategyError):
        search_violation(expr, GF2, 4, ExhaustiveOneDim(fixed=axes))


def test_fixed_binding_validation():
    wrong_space = (("A", span(GF5, 4, [(1, 0, 0, 0)])),)
    with pytest.raises(StrategyError):
        search_violation(builtin("t8"), GF3, 4,
                         ExhaustiveOneDim(fixed=wrong_space))
    not_a_var = (("Q", span(GF3, 4, [(1, 0, 0, 0)])),)
    with pytest.raises(StrategyError):
        search_violation(builtin("t8"), GF3, 4,
                         ExhaustiveOneDim(fixed=not_a_var))


def test_unknown_strategy_object():
    with pytest.raises(StrategyError):
        search_violation(builtin("t8"), GF3, 4, strategy="exhaustive")
