"""Constraint-based coding networks and exact (k,n) linear-code verification.

A network is kept as the constraint system the capacity arguments consume:
message names, derived edge variables with their input sets (acyclic by
declaration order), and demands.  A linear code gives every derived
variable an encoder matrix per input and every demand a decoder matrix
per input; verification composes the encoders into exact global maps over
the message vector and checks each demand decodes to the selector of its
message.

Two capacity bounds are derived mechanically:

* ``capacity_bound_from_inequality`` replays the reduction of a rank
  inequality against the network: every conditional term must be certified
  zero by a network constraint (an edge function or a demand), the
  independence defect collapses because messages are independent, and the
  surviving singletons are bounded by H(message) = k and H(edge) <= n.

* ``dependency_cut_bound`` counts, for one demand, how many of its derived
  inputs transitively depend on the demanded message; k/n cannot exceed
  that count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .expressions import COND, JOINT, TAG_ALL, CharTag, RankExpression
from .gf import Matrix, PrimeField, ShapeError, ZeroInverseError
from .subspace import SubspaceAssignment, span


class NetworkFormatError(ValueError):
    """Malformed network or code text."""


class MissingInverseError(ValueError):
    """A code literal requires inverting a noninvertible field element."""


class UnjustifiedTermError(ValueError):
    """A term that no network constraint zeroes (or maps onto the messages)."""


class NegativeEdgeCoefficientError(ValueError):
    """A reduced derived-variable coefficient is negative; H <= n unusable."""


class NonpositiveDenominatorError(ValueError):
    """The reduced message coefficients do not bound k from above."""


class DegenerateDemandError(ValueError):
    """The demanded message is directly an input; the cut bound is vacuous."""


@dataclass(frozen=True)
class Demand:
    label: str
    target: str
    inputs: tuple[str, ...]


@dataclass(frozen=True)
class Network:
    messages: tuple[str, ...]
    derived: tuple[tuple[str, tuple[str, ...]], ...]
    demands: tuple[Demand, ...]

    def __post_init__(self):
        declared = list(self.messages)
        if len(set(declared)) != len(declared):
            raise NetworkFormatError("duplicate message names")
        for name, inputs in self.derived:
            if name in declared:
                raise NetworkFormatError(f"duplicate variable {name!r}")
            for i in inputs:
                if i not in declared:
                    raise NetworkFormatError(
                        f"derived {name!r} uses undeclared input {i!r}")
            declared.append(name)
        labels = set()
        for d in self.demands:
            if d.label in labels:
                raise NetworkFormatError(f"duplicate demand label {d.label!r}")
            labels.add(d.label)
            if d.target not in self.messages:
                raise NetworkFormatError(
                    f"demand {d.label} target {d.target!r} is not a message")
            for i in d.inputs:
                if i not in declared:
                    raise NetworkFormatError(
                        f"demand {d.label} uses undeclared input {i!r}")

    @property
    def derived_inputs(self) -> dict[str, tuple[str, ...]]:
        return dict(self.derived)

    def is_message(self, name: str) -> bool:
        return name in self.messages

    def demand(self, label: str) -> Demand:
        for d in self.demands:
            if d.label == label:
                return d
        raise NetworkFormatError(f"no demand labeled {label!r}")

    def input_closure(self, name: str) -> frozenset[str]:
        """Everything a variable transitively depends on (empty for messages)."""
        table = self.derived_inputs
        seen: set[str] = set()
        stack = list(table.get(name, ()))
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(table.get(v, ()))
        return frozenset(seen)


@dataclass(frozen=True)
class LinearCode:
    """Per-variable encoder/decoder matrices for a (k,n) linear code."""

    field: PrimeField
    k: int
    n: int
    encoders: Mapping[str, Mapping[str, Matrix]]
    decoders: Mapping[str, Mapping[str, Matrix]]


def check_code_shapes(net: Network, code: LinearCode):
    """Conformance of a code to a network; raises ShapeError on any mismatch."""
    inputs_of = net.derived_inputs

    def expect(mat: Matrix, rows: int, cols: int, what: str):
        if mat.field != code.field:
            raise ShapeError(f"{what}: matrix field {mat.field} differs from "
                             f"code field {code.field}")
        if (mat.rows, mat.cols) != (rows, cols):
            raise ShapeError(f"{what}: expected {rows}x{cols}, "
                             f"got {mat.rows}x{mat.cols}")

    if set(code.encoders) != set(inputs_of):
        raise ShapeError(f"encoders cover {sorted(code.encoders)}, "
                         f"network derives {sorted(inputs_of)}")
    for name, inputs in inputs_of.items():
        enc = code.encoders[name]
        if set(enc) != set(inputs):
            raise ShapeError(f"encoder {name}: inputs {sorted(enc)} != "
                             f"declared {sorted(inputs)}")
        for i, mat in enc.items():
            width = code.k if net.is_message(i) else code.n
            expect(mat, code.n, width, f"encoder {name}<-{i}")
    labels = {d.label for d in net.demands}
    if set(code.decoders) != labels:
        raise ShapeError(f"decoders cover {sorted(code.decoders)}, "
                         f"network demands {sorted(labels)}")
    for d in net.demands:
        dec = code.decoders[d.label]
        if set(dec) != set(d.inputs):
            raise ShapeError(f"decoder {d.label}: inputs {sorted(dec)} != "
                             f"declared {sorted(d.inputs)}")
        for i, mat in dec.items():
            width = code.k if net.is_message(i) else code.n
            expect(mat, code.k, width, f"decoder {d.label}<-{i}")


def message_selector(net: Network, code: LinearCode, message: str) -> Matrix:
    """k x (k|M|) matrix picking out one message block of the message vector."""
    m = len(net.messages)
    offset = net.messages.index(message) * code.k
    entries = []
    for r in range(code.k):
        row = [0] * (code.k * m)
        row[offset + r] = 1
        entries.extend(row)
    return Matrix(code.field, code.k, code.k * m, tuple(entries))


def compose_global(net: Network, code: LinearCode) -> dict[str, Matrix]:
    """Global linear map of every derived variable over the message vector."""
    check_code_shapes(net, code)
    global_map: dict[str, Matrix] = {
        m: message_selector(net, code, m) for m in net.messages}
    out: dict[str, Matrix] = {}
    for name, inputs in net.derived:
        total = Matrix.zeros(code.field, code.n, code.k * len(net.messages))
        for i in inputs:
            total = total + code.encoders[name][i] @ global_map[i]
        global_map[name] = total
        out[name] = total
    return out


@dataclass(frozen=True)
class DemandVerdict:
    label: str
    target: str
    ok: bool
    residual: Matrix  # decoded map minus the target selector


@dataclass(frozen=True)
class SolutionVerdict:
    ok: bool
    demands: tuple[DemandVerdict, ...]

    def failing(self) -> tuple[str, ...]:
        return tuple(d.label for d in self.demands if not d.ok)


def verify_solution(net: Network, code: LinearCode) -> SolutionVerdict:
    """Check every demand decodes to exactly its message, as matrices."""
    global_map = compose_global(net, code)
    for m in net.messages:
        global_map[m] = message_selector(net, code, m)
    verdicts = []
    for d in net.demands:
        decoded = Matrix.zeros(code.field, code.k, code.k * len(net.messages))
        for i in d.inputs:
            decoded = decoded + code.decoders[d.label][i] @ global_map[i]
        residual = decoded - message_selector(net, code, d.target)
        verdicts.append(DemandVerdict(d.label, d.target, residual.is_zero,
                                      residual))
    return SolutionVerdict(all(v.ok for v in verdicts), tuple(verdicts))


def induced_assignment(net: Network, code: LinearCode) -> SubspaceAssignment:
    """Each variable as the row space of its global map in GF(p)^(k|M|)."""
    ambient = code.k * len(net.messages)
    global_map = compose_global(net, code)
    bindings = {m: span(code.field, ambient,
                        message_selector(net, code, m).row_list())
                for m in net.messages}
    for name, mat in global_map.items():
        bindings[name] = span(code.field, ambient, mat.row_list())
    return SubspaceAssignment(code.field, ambient, bindings)


# --- capacity bounds ----------------------------------------------------------

@dataclass(frozen=True)
class CapacityBound:
    value: Fraction
    provenance: str
    trace: tuple[str, ...]
    applicability: CharTag = TAG_ALL

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("capacity bound must be positive")


def contradicts(bound: CapacityBound, p: int, k: int, n: int) -> bool:
    """Would a verified (k,n) code over characteristic p violate the bound?"""
    return bound.applicability.admits(p) and Fraction(k, n) > bound.value


def capacity_bound_from_inequality(net: Network, expr: RankExpression,
                                   var_map: Mapping[str, str] | None = None
                                   ) -> CapacityBound:
    """Reduce a rank inequality against the network constraints to k/n <= v.

    Every conditional term must be certified zero (its subject is a derived
    variable conditioned on all of its inputs, or a demanded message
    conditioned on all of a matching demand's inputs); the lone negative
    multi-variable joint term must sit exactly on the message set.  What
    remains are singletons: message ranks are k, derived ranks at most n.
    """
    var_map = dict(var_map or {})
    names = set(net.messages) | set(net.derived_inputs)

    def mapped(v: str) -> str:
        target = var_map.get(v, v)
        if target not in names:
            raise UnjustifiedTermError(
                f"variable {v!r} maps to {target!r}, not a network name")
        return target

    inputs_of = net.derived_inputs
    trace: list[str] = []
    singles: dict[str, Fraction] = {}
    multis: dict[frozenset[str], Fraction] = {}

    for term in expr.terms:
        if term.kind == COND:
            if len(term.s) != 1:
                raise UnjustifiedTermError(
                    f"no network constraint zeroes {term.render()}")
            s = mapped(next(iter(term.s)))
            t = {mapped(v) for v in term.t}
            rendered = f"H({s}|{','.join(sorted(t))})"
            if s in inputs_of and t >= set(inputs_of[s]):
                trace.append(f"{rendered} = 0: derive {s} <- "
                             f"{','.join(inputs_of[s])}")
            else:
                demand = next(
                    (d for d in net.demands
                     if d.target == s and t >= set(d.inputs)), None)
                if demand is None:
                    raise UnjustifiedTermError(
                        f"no network constraint zeroes {rendered}")
                trace.append(f"{rendered} = 0: demand {demand.label}: "
                             f"{demand.target} <- {','.join(demand.inputs)}")
        elif term.kind == JOINT:
            support = frozenset(mapped(v) for v in term.s)
            if len(support) == 1:
                v = next(iter(support))
                singles[v] = singles.get(v, Fraction(0)) + term.coeff
            else:
                multis[support] = multis.get(support, Fraction(0)) + term.coeff
        else:
            raise UnjustifiedTermError(
                f"no network constraint zeroes {term.render()}")

    for support, coeff in multis.items():
        if coeff == 0:
            continue
        if support != set(net.messages):
            raise UnjustifiedTermError(
                f"joint term H({','.join(sorted(support))}) is not the "
                f"message set")
        for m in net.messages:
            singles[m] = singles.get(m, Fraction(0)) + coeff
        trace.append(f"H({','.join(sorted(support))}) = "
                     + " + ".join(f"H({m})" for m in net.messages)
                     + ": messages independent")

    message_sum = Fraction(0)
    edge_sum = Fraction(0)
    for v, coeff in sorted(singles.items()):
        if coeff == 0:
            continue
        if net.is_message(v):
            message_sum += coeff
            trace.append(f"H({v}) = k  (coefficient {coeff})")
        else:
            if coeff < 0:
                raise NegativeEdgeCoefficientError(
                    f"H({v}) carries negative coefficient {coeff}; "
                    f"H({v}) <= n does not apply")
            edge_sum += coeff
            trace.append(f"H({v}) <= n  (coefficient {coeff})")

    denominator = -message_sum
    if denominator <= 0:
        raise NonpositiveDenominatorError(
            f"message coefficients sum to {message_sum}; no k upper bound")
    value = edge_sum / denominator
    trace.append(f"{denominator}k <= {edge_sum}n, so k/n <= {value}")
    return CapacityBound(value, f"inequality {expr.name}", tuple(trace),
                         expr.applicability)


def dependency_cut_bound(net: Network, demand: Demand | str) -> CapacityBound:
    """k/n <= number of the demand's derived inputs that depend on its message."""
    d = net.demand(demand) if isinstance(demand, str) else demand
    if d.target in d.inputs:
        raise DegenerateDemandError(
            f"demand {d.label} receives {d.target} directly; the bound is vacuous")
    carriers = [i for i in d.inputs
                if not net.is_message(i) and d.target in net.input_closure(i)]
    trace = [f"demand {d.label}: {d.target} <- {','.join(d.inputs)}"]
    for i in d.inputs:
        if net.is_message(i):
            continue
        has = d.target in net.input_closure(i)
        trace.append(f"input {i} {'depends on' if has else 'is independent of'} "
                     f"{d.target}")
    if not carriers:
        raise ValueError(
            f"demand {d.label} cannot be satisfied: no input carries {d.target}")
    trace.append(f"all of {d.target} reaches {d.label} through "
                 f"{len(carriers)} edge variable(s), so k/n <= {len(carriers)}")
    return CapacityBound(Fraction(len(carriers)), f"cut at demand {d.label}",
                         tuple(trace))


def network_cut_bound(net: Network) -> CapacityBound:
    """Minimum dependency-cut bound over all non-degenerate demands."""
    best: Optional[CapacityBound] = None
    for d in net.demands:
        try:
            bound = dependency_cut_bound(net, d)
        except DegenerateDemandError:
            continue
        if best is None or bound.value < best.value:
            best = bound
    if best is None:
        raise DegenerateDemandError("every demand receives its message directly")
    return best


# --- built-ins ----------------------------------------------------------------

BUILTIN_NETWORKS = ("butterfly", "t8", "non-t8")


def builtin_network(name: str) -> Network:
    if name == "butterfly":
        return Network(
            messages=("x", "y"),
            derived=(("z", ("x", "y")),),
            demands=(Demand("n5", "y", ("x", "z")),
                     Demand("n6", "x", ("y", "z"))))
    if name == "t8":
        return Network(
            messages=("A", "B", "C", "D"),
            derived=(("Z", ("A", "B", "C")),
                     ("W", ("B", "C", "D")),
                     ("X", ("A", "C", "D")),
                     ("Y", ("W", "X", "Z"))),
            demands=(Demand("n9", "A", ("B", "D", "Y")),
                     Demand("n10", "D", ("A", "W", "Z")),
                     Demand("n11", "C", ("D", "Y", "Z")),
                     Demand("n12", "B", ("D", "X", "Z")),
                     Demand("n13", "C", ("B", "X", "Y")),
                     Demand("n14", "C", ("A", "W", "Y")),
                     Demand("n15", "B", ("A", "W", "X"))))
    if name == "non-t8":
        return Network(
            messages=("A", "B", "C", "D"),
            derived=(("W", ("B", "C", "D")),
                     ("X", ("A", "C", "D")),
                     ("Y", ("A", "B", "D")),
                     ("Z", ("A", "B", "C"))),
            demands=(Demand("n9", "A", ("B", "W", "X")),
                     Demand("n10", "C", ("A", "W", "Y")),
                     Demand("n11", "B", ("C", "X", "Y")),
                     Demand("n12", "D", ("A", "W", "Z")),
                     Demand("n13", "B", ("D", "X", "Z")),
                     Demand("n14", "C", ("D", "Y", "Z")),
                     Demand("n15", "A", ("W", "X", "Y", "Z"))))
    raise NetworkFormatError(
        f"unknown network {name!r}; known: {', '.join(BUILTIN_NETWORKS)}")


def _scalar(field: PrimeField, value: int) -> Matrix:
    return Matrix(field, 1, 1, (value % field.p,))


def builtin_code(name: str, p: int) -> LinearCode:
    """The scalar (k = n = 1) code literals for a builtin network, over GF(p).

    The literals involve 2^-1 (t8) and 3^-1 (non-t8); over characteristics
    where these do not exist, construction fails with MissingInverseError.
    """
    field = PrimeField(p)

    def inv(value: int) -> int:
        try:
            return field.inverse(value)
        except ZeroInverseError:
            raise MissingInverseError(
                f"code {name!r} needs {value}^-1, which does not exist "
                f"over GF({p})") from None

    one = _scalar(field, 1)
    neg = _scalar(field, -1)
    if name == "butterfly":
        return LinearCode(
            field, 1, 1,
            encoders={"z": {"x": one, "y": one}},
            decoders={"n5": {"z": one, "x": neg},
                      "n6": {"z": one, "y": neg}})
    if name == "t8":
        half = inv(2)
        neg_half = _scalar(field, -half)
        return LinearCode(
            field, 1, 1,
            encoders={"Z": {"A": one, "B": one, "C": one},
                      "W": {"B": one, "C": one, "D": one},
                      "X": {"A": one, "C": one, "D": one},
                      "Y": {"W": one, "X": one, "Z": one}},
            decoders={"n9": {"Y": _scalar(field, half), "B": neg, "D": neg},
                      "n10": {"W": one, "Z": neg, "A": one},
                      "n11": {"Z": one, "Y": neg_half, "D": one},
                      "n12": {"Z": one, "X": neg, "D": one},
                      "n13": {"X": one, "Y": neg_half, "B": one},
                      "n14": {"W": one, "Y": neg_half, "A": one},
                      "n15": {"W": one, "X": neg, "A": one}})
    if name == "non-t8":
        third = inv(3)
        return LinearCode(
            field, 1, 1,
            encoders={"W": {"B": one, "C": one, "D": one},
                      "X": {"A": one, "C": one, "D": one},
                      "Y": {"A": one, "B": one, "D": one},
                      "Z": {"A": one, "B": one, "C": one}},
            decoders={"n9": {"X": one, "W": neg, "B": one},
                      "n10": {"W": one, "Y": neg, "A": one},
                      "n11": {"Y": one, "X": neg, "C": one},
                      "n12": {"W": one, "Z": neg, "A": one},
                      "n13": {"Z": one, "X": neg, "D": one},
                      "n14": {"Z": one, "Y": neg, "D": one},
                      "n15": {"X": _scalar(field, third),
                              "Y": _scalar(field, third),
                              "Z": _scalar(field, third),
                              "W": _scalar(field, -2 * third)}})
    raise NetworkFormatError(
        f"unknown code {name!r}; known: {', '.join(BUILTIN_NETWORKS)}")


# --- text formats ---------------------------------------------------------
#
# Network:                        Code:
#   messages A,B,C,D                field 3
#   derive Z <- A,B,C               k 1
#   demand n9: A <- B,D,Y           n 1
#                                   encode Z: A=[1] B=[1] C=[1]
#                                   decode n9: Y=[2] B=[2] D=[2]
#
# Matrix literals are row-major; rows may be separated by ';'.

def parse_network(text: str) -> Network:
    messages: tuple[str, ...] = ()
    derived = []
    demands = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("messages"):
                messages = tuple(
                    v.strip() for v in line[len("messages"):].split(","))
            elif line.startswith("derive"):
                head, inputs = line[len("derive"):].split("<-")
                derived.append((head.strip(),
                                tuple(v.strip() for v in inputs.split(","))))
            elif line.startswith("demand"):
                head, inputs = line[len("demand"):].split("<-")
                label, target = head.split(":")
                demands.append(Demand(label.strip(), target.strip(),
                                      tuple(v.strip() for v in inputs.split(","))))
            else:
                raise ValueError("unrecognized directive")
        except ValueError as exc:
            raise NetworkFormatError(f"line {lineno}: {exc}: {raw!r}") from None
    return Network(messages, tuple(derived), tuple(demands))


def _parse_matrix_literal(body: str, field: PrimeField,
                          rows: int, cols: int) -> Matrix:
    entries = []
    for chunk in body.replace(";", " ").replace(",", " ").split():
        entries.append(int(chunk))
    if len(entries) != rows * cols:
        raise NetworkFormatError(
            f"matrix literal [{body}] has {len(entries)} entries, "
            f"expected {rows}x{cols}")
    return Matrix(field, rows, cols, tuple(entries))


def _parse_matrix_assignments(rest: str, field: PrimeField, out_rows: int,
                              width_of) -> dict[str, Matrix]:
    mats: dict[str, Matrix] = {}
    pos = 0
    while pos < len(rest):
        if rest[pos].isspace():
            pos += 1
            continue
        eq = rest.find("=", pos)
        if eq < 0:
            raise NetworkFormatError(f"expected NAME=[...] near {rest[pos:]!r}")
        name = rest[pos:eq].strip()
        open_b = rest.find("[", eq)
        close_b = rest.find("]", open_b)
        if open_b < 0 or close_b < 0:
            raise NetworkFormatError(f"unterminated matrix literal for {name!r}")
        mats[name] = _parse_matrix_literal(rest[open_b + 1:close_b], field,
                                           out_rows, width_of(name))
        pos = close_b + 1
    return mats


def parse_code(text: str, net: Network) -> LinearCode:
    field = None
    k = n = None
    encoder_lines = []
    decoder_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("field"):
            field = PrimeField(int(line[len("field"):]))
        elif line.startswith("k "):
            k = int(line[2:])
        elif line.startswith("n "):
            n = int(line[2:])
        elif line.startswith("encode"):
            encoder_lines.append((lineno, line[len("encode"):]))
        elif line.startswith("decode"):
            decoder_lines.append((lineno, line[len("decode"):]))
        else:
            raise NetworkFormatError(f"line {lineno}: cannot parse {raw!r}")
    if field is None or k is None or n is None:
        raise NetworkFormatError("missing field/k/n headers")

    def width_of(name: str) -> int:
        return k if net.is_message(name) else n

    encoders: dict[str, dict[str, Matrix]] = {}
    for lineno, rest in encoder_lines:
        name, body = rest.split(":", 1)
        encoders[name.strip()] = _parse_matrix_assignments(
            body, field, n, width_of)
    decoders: dict[str, dict[str, Matrix]] = {}
    for lineno, rest in decoder_lines:
        label, body = rest.split(":", 1)
        decoders[label.strip()] = _parse_matrix_assignments(
            body, field, k, width_of)
    code = LinearCode(field, k, n, encoders, decoders)
    check_code_shapes(net, code)
    return code
