"""Exact workbench for linear rank inequalities over finite-field subspaces,
vector matroids, and network-coding capacity bounds."""

from .gf import (FieldMismatchError, Matrix, PrimeField, ShapeError,
                 ZeroInverseError, field_inverse, kernel_basis, mat_mul, rref)
from .subspace import (NotASubspaceError, Subspace, SubspaceAssignment,
                       UnboundVariableError, codim, format_assignment,
                       intersect, join, parse_assignment, random_assignment,
                       random_subspace, span)
from .expressions import (CharTag, EntropyTerm, ExpressionSyntaxError,
                          RankExpression, UnknownNameError, builtin, desugar,
                          evaluate, format_expression, holds, parse_expression)
from .search import (ExhaustiveOneDim, RandomSearch, StrategyError,
                     one_dim_candidates, search_violation)
from .matroid import (SizeLimitError, UnknownLabelError, VectorMatroid,
                      builtin_matroid, check_independence_axioms,
                      matroid_report)
from .network import (CapacityBound, Demand, DegenerateDemandError,
                      LinearCode, MissingInverseError,
                      NegativeEdgeCoefficientError, Network,
                      NonpositiveDenominatorError, UnjustifiedTermError,
                      builtin_code, builtin_network,
                      capacity_bound_from_inequality, compose_global,
                      contradicts, dependency_cut_bound, induced_assignment,
                      network_cut_bound, parse_code, parse_network,
                      verify_solution)
# the entropy() function itself stays in rankineq.entropy so the submodule
# name is not shadowed
from .entropy import (JointDistribution, builtin_distribution,
                      evaluate_on_distribution, induce_distribution,
                      parse_distribution)

__version__ = "0.1.0"
