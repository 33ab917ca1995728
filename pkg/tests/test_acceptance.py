"""Acceptance suite: one test per criterion, exact tolerances, one
pass/fail line each (visible with pytest -s)."""

import functools
import math
import random
import time
from fractions import Fraction
from itertools import combinations

from rankineq.entropy import (builtin_distribution, entropy,
                              evaluate_on_distribution, induce_distribution)
from rankineq.expressions import (builtin, desugar, evaluate,
                                  parse_expression)
from rankineq.gf import PrimeField
from rankineq.matroid import builtin_matroid, check_independence_axioms
from rankineq.network import (MissingInverseError, builtin_code,
                              builtin_network, capacity_bound_from_inequality,
                              dependency_cut_bound, verify_solution)
from rankineq.search import ExhaustiveOneDim, search_violation
from rankineq.subspace import intersect, join, random_assignment, span

from oracles import (all_subspaces, counterexample_assignment,
                     eval_terms_directly, oracle_intersect_vectors,
                     oracle_join_vectors, random_expression, set_dim,
                     simulate_code, subspace_vectors)

GF2, GF3, GF5, GF7 = map(PrimeField, (2, 3, 5, 7))

T8_CONDITIONALS = [
    ("Z", "ABC"), ("W", "BCD"), ("X", "ACD"), ("Y", "WXZ"),
    ("A", "BDY"), ("D", "AWZ"), ("C", "DYZ"), ("B", "DXZ"),
    ("C", "BXY"), ("C", "AWY"), ("B", "AWX"),
]

NON_T8_CONDITIONALS = [
    ("W", "BCD"), ("X", "ACD"), ("Y", "ABD"), ("Z", "ABC"),
    ("A", "BWX"), ("C", "AWY"), ("B", "CXY"), ("D", "AWZ"),
    ("B", "DXZ"), ("C", "DYZ"), ("A", "WXYZ"),
]


def criterion(num, desc):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper():
            try:
                fn()
            except BaseException:
                print(f"\nACCEPTANCE {num:02d} FAIL: {desc}")
                raise
            print(f"\nACCEPTANCE {num:02d} PASS: {desc}")
        return wrapper
    return deco


@criterion(1, "t8 counterexample: residual exactly -1 over GF(3)")
def test_criterion_01_t8_counterexample():
    ctx = counterexample_assignment(3)
    t8 = builtin("t8")
    assert evaluate(t8, ctx) == Fraction(-1)
    # the residual decomposes as stated: singleton sum 8+29+3+8-6-17-8-17 = 0
    singles = (8 * ctx.joint_rank("Z") + 29 * ctx.joint_rank("Y")
               + 3 * ctx.joint_rank("X") + 8 * ctx.joint_rank("W")
               - 6 * ctx.joint_rank("D") - 17 * ctx.joint_rank("C")
               - 8 * ctx.joint_rank("B") - 17 * ctx.joint_rank("A"))
    assert singles == 0
    for s, t in T8_CONDITIONALS:
        assert ctx.cond_rank(s, t) == 0, (s, t)
    defect = (sum(ctx.joint_rank(m) for m in "ABCD")
              - ctx.joint_rank("ABCD"))
    assert defect == 0


@criterion(2, "non-t8 counterexample: residual exactly -1 over GF(2/5/7)")
def test_criterion_02_non_t8_counterexample():
    nt = builtin("non-t8")
    for p in (2, 5, 7):
        ctx = counterexample_assignment(p)
        assert evaluate(nt, ctx) == Fraction(-1), p
        assert ctx.cond_rank("A", "WXYZ") == 0, p
    # the characteristic-dependent term is nonzero exactly at p = 3
    assert counterexample_assignment(3).cond_rank("A", "WXYZ") == 1


@criterion(3, "characteristic validity on 2000 seeded assignments per field")
def test_criterion_03_characteristic_validity():
    cases = [
        (builtin("t8"), (GF2, GF5, GF7)),
        (builtin("non-t8"), (GF3,)),
        (builtin("ingleton"), (GF2, GF3, GF5)),
        (builtin("shannon-elemental"), (GF2, GF3, GF5)),
    ]
    for expr, fields in cases:
        for field in fields:
            rng = random.Random(1000 * field.p + len(expr.variables))
            for i in range(2000):
                ctx = random_assignment(rng, field, 4, expr.variables,
                                        max_dim=4)
                residual = evaluate(expr, ctx)
                assert residual >= 0, (expr.name, field.p, i, residual)


@criterion(4, "exhaustive 1-dim search over GF(3)^4 finds a t8 violation")
def test_criterion_04_exhaustive_search():
    start = time.monotonic()
    found = search_violation(builtin("t8"), GF3, 4, ExhaustiveOneDim())
    assert found is not None
    assert evaluate(builtin("t8"), found) < 0
    # the known violating assignment is itself reported violating
    assert evaluate(builtin("t8"), counterexample_assignment(3)) == -1
    assert time.monotonic() - start < 600


@criterion(5, "t8 network: GF(3) code verifies, GF(5) literals fail at the "
              "2^-1 demands, simulation agrees")
def test_criterion_05_t8_network():
    net = builtin_network("t8")
    gf3_verdict = verify_solution(net, builtin_code("t8", 3))
    assert gf3_verdict.ok and len(gf3_verdict.demands) == 7
    gf5_verdict = verify_solution(net, builtin_code("t8", 5))
    assert gf5_verdict.failing() == ("n9", "n11", "n13", "n14")
    for p, verdict in ((3, gf3_verdict), (5, gf5_verdict)):
        simulated = simulate_code(net, builtin_code("t8", p))
        assert {v.label: v.ok for v in verdict.demands} == simulated


@criterion(6, "non-t8 network: code verifies off characteristic 3, "
              "missing inverse at 3; butterfly verifies over GF(2)")
def test_criterion_06_non_t8_network():
    net = builtin_network("non-t8")
    for p in (2, 5, 7):
        assert verify_solution(net, builtin_code("non-t8", p)).ok, p
    try:
        builtin_code("non-t8", 3)
        raise AssertionError("3^-1 should not exist over GF(3)")
    except MissingInverseError:
        pass
    assert verify_solution(builtin_network("butterfly"),
                           builtin_code("butterfly", 2)).ok


@criterion(7, "capacity bounds 48/49 and 28/29 with reduction traces; "
              "cut bounds all 1")
def test_criterion_07_capacity_bounds():
    t8_bound = capacity_bound_from_inequality(builtin_network("t8"),
                                              builtin("t8"))
    assert t8_bound.value == Fraction(48, 49)
    nt_bound = capacity_bound_from_inequality(builtin_network("non-t8"),
                                              builtin("non-t8"))
    assert nt_bound.value == Fraction(28, 29)
    # every conditional term is zeroed by a named network constraint
    for bound, conds in ((t8_bound, T8_CONDITIONALS),
                         (nt_bound, NON_T8_CONDITIONALS)):
        zero_lines = [line for line in bound.trace if "= 0:" in line]
        assert len(zero_lines) == 11
        for s, t in conds:
            want = f"H({s}|{','.join(sorted(t))}) = 0"
            assert any(want in line for line in zero_lines), want
            justification = next(l for l in zero_lines if want in l)
            assert ("derive" in justification) or ("demand" in justification)
    assert dependency_cut_bound(builtin_network("t8"), "n9").value == 1
    assert dependency_cut_bound(builtin_network("non-t8"), "n9").value == 1
    assert dependency_cut_bound(builtin_network("butterfly"), "n6").value == 1


@criterion(8, "matroids: 2x5 example verbatim; {W,X,Y,Z} circuit at 3, "
              "base at 2 and 5; axioms exhaustive")
def test_criterion_08_matroids():
    m = builtin_matroid("t8-example-2x5", 2)
    assert m.rank(m.ground) == 2
    assert m.bases() == {frozenset(s) for s in ["ab", "ae", "bd", "be", "de"]}
    assert m.circuits() == {frozenset(s) for s in ["c", "ad", "abe", "bde"]}
    wxyz = frozenset("WXYZ")
    assert wxyz in builtin_matroid("t8", 3).circuits()
    for p in (2, 5):
        assert wxyz in builtin_matroid("t8", p).bases()
    for m in (builtin_matroid("t8-example-2x5", 2), builtin_matroid("t8", 3)):
        assert check_independence_axioms(m.ground, m.independent_sets()) == []


@criterion(9, "Ingleton distribution: I(A;B) = (5 - log2 27)/2, "
              "other terms zero, residual negative")
def test_criterion_09_ingleton_distribution():
    d = builtin_distribution("ingleton-4atom")
    i_ab = evaluate_on_distribution(parse_expression("I(A;B)"), d)
    assert abs(i_ab - (5 - math.log2(27)) / 2) < 1e-9
    for text in ("I(A;B|C)", "I(A;B|D)", "I(C;D)"):
        value = evaluate_on_distribution(parse_expression(text), d)
        assert abs(value) < 1e-12, text
    assert evaluate_on_distribution(builtin("ingleton"), d) < 0


@criterion(10, "rank-entropy bridge: induced entropies equal ranks; all 11 "
               "zero conditionals reproduced")
def test_criterion_10_rank_entropy_bridge():
    subsets = [set(s) for r in (1, 2, 3)
               for s in combinations("ABC", r)]
    for field in (GF2, GF3):
        rng = random.Random(field.p)
        for _ in range(200):
            ctx = random_assignment(rng, field, 3, ("A", "B", "C"))
            dist = induce_distribution(ctx)
            for s in subsets:
                assert abs(entropy(dist, s) - ctx.joint_rank(s)) < 1e-9
    dist = induce_distribution(counterexample_assignment(3))
    for s, t in T8_CONDITIONALS:
        cond = entropy(dist, set(s) | set(t)) - entropy(dist, set(t))
        assert abs(cond) < 1e-9, (s, t)


@criterion(11, "oracle equivalence: join/intersect/rank vs enumeration; "
               "desugar preserves values exactly")
def test_criterion_11_oracle_equivalence():
    # every pair of subspaces of GF(2)^3
    spaces = all_subspaces(GF2, 3)
    assert len(spaces) == 16
    for a in spaces:
        for b in spaces:
            assert subspace_vectors(join([a, b])) == oracle_join_vectors(a, b)
            meet = intersect(a, b)
            assert subspace_vectors(meet) == oracle_intersect_vectors(a, b)
            assert meet.dim == set_dim(oracle_intersect_vectors(a, b), 2)
    rng = random.Random(97)
    for _ in range(500):
        vecs = [[rng.randrange(3) for _ in range(3)]
                for _ in range(rng.randint(0, 3))]
        a = span(GF3, 3, vecs)
        b = span(GF3, 3, [[rng.randrange(3) for _ in range(3)]
                          for _ in range(rng.randint(0, 3))])
        assert subspace_vectors(join([a, b])) == oracle_join_vectors(a, b)
        assert subspace_vectors(intersect(a, b)) == oracle_intersect_vectors(a, b)
    for _ in range(500):
        e = random_expression(rng, ("A", "B", "C"))
        ctx = random_assignment(rng, rng.choice((GF2, GF3)), 3,
                                ("A", "B", "C"))
        direct = eval_terms_directly(e, ctx)
        assert evaluate(e, ctx) == direct
        assert evaluate(desugar(e), ctx) == direct
