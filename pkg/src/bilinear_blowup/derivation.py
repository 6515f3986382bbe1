"""Rule engine over boundedness statements for critical bilinear classes.

The engine manipulates statements of the form

    every symbol of class order m (roughness rho) maps X1 x X2 -> Y

with X, Y tagged Lebesgue / Hardy / BMO spaces carrying exact rational
reciprocals.  A small set of trusted axioms (two known boundedness facts,
first-slot transposition, affine interpolation, class inclusion, the
bounded-multiplier upper bound, and the critical-order equality on the
open Lebesgue range) is chained into a `DerivationTrace` that either
forces the index identity 1/p = 1/p1 + 1/p2 or bottoms out in a
contradiction for the structurally invalid endpoint cases.

Every trace step records (rule name, inputs, output) with exact rational
data, so a trace can be replayed step by step: `replay_trace` re-applies
each rule to its recorded inputs and demands the recorded output.
Hardy and BMO tags are purely symbolic; no numerics are attached to them.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction

from .exponents import (
    ExponentTriple,
    HALF,
    ONE,
    as_fraction,
    base_order,
    critical_order,
)


class DerivationError(ValueError):
    """An axiom was applied outside its hypotheses."""


# ---------------------------------------------------------------------------
# statements and constraints
# ---------------------------------------------------------------------------

LEBESGUE = "L"
HARDY = "H"
BMO = "BMO"


@dataclass(frozen=True)
class Space:
    """A function-space tag: Lebesgue/Hardy with reciprocal, or BMO."""

    kind: str
    inv_p: Fraction | None

    def __post_init__(self):
        if self.kind not in (LEBESGUE, HARDY, BMO):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == BMO:
            if self.inv_p is not None:
                raise ValueError("BMO carries no exponent")
        else:
            if self.inv_p is None or self.inv_p < 0:
                raise ValueError(f"need reciprocal >= 0, got {self.inv_p}")

    @property
    def reciprocal(self) -> Fraction:
        """Reciprocal used for interpolation bookkeeping; BMO counts as 0."""
        return Fraction(0) if self.kind == BMO else self.inv_p

    def __str__(self):
        if self.kind == BMO:
            return "BMO"
        return f"{self.kind}[1/p={self.inv_p}]"


def lebesgue(inv_p) -> Space:
    return Space(LEBESGUE, as_fraction(inv_p))


def hardy(inv_p) -> Space:
    return Space(HARDY, as_fraction(inv_p))


def bmo() -> Space:
    return Space(BMO, None)


@dataclass(frozen=True)
class BoundednessStatement:
    """All operators of the class with this order map source1 x source2 -> target."""

    order: Fraction
    rho: Fraction
    n: int
    source1: Space
    source2: Space
    target: Space

    def __post_init__(self):
        if self.target.kind == HARDY:
            raise ValueError("Hardy spaces appear as sources only")
        for s in (self.source1, self.source2):
            if s.kind == BMO:
                raise ValueError("BMO appears as a target only")

    @property
    def triple(self) -> ExponentTriple:
        return ExponentTriple(
            self.source1.reciprocal, self.source2.reciprocal, self.target.reciprocal
        )

    def __str__(self):
        return (
            f"Op(order {self.order}, rho {self.rho}) c B({self.source1} x "
            f"{self.source2} -> {self.target})"
        )


EQ = "="
LE = "<="


@dataclass(frozen=True)
class Constraint:
    """An exact relation between two rationals, e.g. 1/p = 1/p1 + 1/p2."""

    lhs: Fraction
    rhs: Fraction
    relation: str = EQ

    def __post_init__(self):
        if self.relation not in (EQ, LE):
            raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def satisfied(self) -> bool:
        return self.lhs == self.rhs if self.relation == EQ else self.lhs <= self.rhs

    def __str__(self):
        mark = "ok" if self.satisfied else "VIOLATED"
        return f"{self.lhs} {self.relation} {self.rhs} [{mark}]"


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------


def hypothesis_statement(triple: ExponentTriple, rho, n: int) -> BoundednessStatement:
    """The assumed boundedness at the critical order for this triple.

    Sources are Hardy tags (identical to Lebesgue beyond reciprocal 1),
    the target is Lebesgue, or BMO when 1/p = 0.
    """
    rho = as_fraction(rho)
    if not 0 < rho < 1:
        raise DerivationError(f"rho must lie in (0, 1), got {rho}")
    order = critical_order(triple.point, n, rho, family="J")
    target = bmo() if triple.inv_p == 0 else lebesgue(triple.inv_p)
    return BoundednessStatement(
        order, rho, n, hardy(triple.inv_p1), hardy(triple.inv_p2), target
    )


def hardy_is_lebesgue(stmt: BoundednessStatement) -> BoundednessStatement:
    """Retag Hardy sources with reciprocal < 1 as Lebesgue (H^p = L^p, p > 1)."""

    def convert(s: Space) -> Space:
        if s.kind == HARDY:
            if s.inv_p >= 1:
                raise DerivationError(f"H with 1/p={s.inv_p} is not a Lebesgue space")
            return lebesgue(s.inv_p)
        return s

    return BoundednessStatement(
        stmt.order,
        stmt.rho,
        stmt.n,
        convert(stmt.source1),
        convert(stmt.source2),
        stmt.target,
    )


def transpose_first(stmt: BoundednessStatement) -> BoundednessStatement:
    """Duality in the first slot; the class order and rho are unchanged.

    For a Lebesgue target L^p with 1 <= p < inf and first source with
    1/p1 < 1 the result is (L^{p'} x X2 -> L^{p1'}).  For a BMO target the
    dual source is H^1 and the result is (H^1 x X2 -> L^{p1'}).
    """
    x = stmt.source1.reciprocal
    if x >= 1:
        raise DerivationError(f"first source 1/p1={x} has no Lebesgue dual")
    new_target = lebesgue(ONE - x)
    if stmt.target.kind == BMO:
        return BoundednessStatement(
            stmt.order, stmt.rho, stmt.n, hardy(ONE), stmt.source2, new_target
        )
    z = stmt.target.inv_p
    if not 0 < z <= 1:
        raise DerivationError(f"target 1/p={z} has no dual pairing")
    return BoundednessStatement(
        stmt.order, stmt.rho, stmt.n, lebesgue(ONE - z), stmt.source2, new_target
    )


def interpolate(
    s0: BoundednessStatement, s1: BoundednessStatement, theta
) -> BoundednessStatement:
    """Affine combination with weights (1-theta, theta), theta in (0, 1).

    Reciprocals (BMO counting as 0) and class orders combine affinely.
    A slot is tagged Hardy if either operand tags it Hardy; the target is
    Lebesgue unless both operands have BMO targets.
    """
    theta = as_fraction(theta)
    if not 0 < theta < 1:
        raise DerivationError(f"theta must lie in (0, 1), got {theta}")
    if (s0.rho, s0.n) != (s1.rho, s1.n):
        raise DerivationError("statements must share rho and dimension")

    def mix(a: Fraction, b: Fraction) -> Fraction:
        return (1 - theta) * a + theta * b

    def mix_source(a: Space, b: Space) -> Space:
        kind = HARDY if HARDY in (a.kind, b.kind) else LEBESGUE
        return Space(kind, mix(a.reciprocal, b.reciprocal))

    if s0.target.kind == BMO and s1.target.kind == BMO:
        target = bmo()
    else:
        target = lebesgue(mix(s0.target.reciprocal, s1.target.reciprocal))
    return BoundednessStatement(
        mix(s0.order, s1.order),
        s0.rho,
        s0.n,
        mix_source(s0.source1, s1.source1),
        mix_source(s0.source2, s1.source2),
        target,
    )


def class_inclusion(stmt: BoundednessStatement, new_order) -> BoundednessStatement:
    """Lower the class order: boundedness of the larger class restricts down."""
    new_order = as_fraction(new_order)
    if new_order > stmt.order:
        raise DerivationError(
            f"cannot raise order {stmt.order} to {new_order}; inclusion only lowers"
        )
    return BoundednessStatement(
        new_order, stmt.rho, stmt.n, stmt.source1, stmt.source2, stmt.target
    )


def known_l2l2l1(rho, n: int = 1) -> BoundednessStatement:
    """Known fact: order -(1-rho)n/2 maps L2 x L2 -> L1."""
    rho = as_fraction(rho)
    if not 0 < rho < 1:
        raise DerivationError(f"rho must lie in (0, 1), got {rho}")
    order = -(1 - rho) * Fraction(n, 2)
    return BoundednessStatement(order, rho, n, lebesgue(HALF), lebesgue(HALF), lebesgue(ONE))


def known_split_l2(rho, n: int, inv_a) -> BoundednessStatement:
    """Known fact: order -(1-rho)n/2 maps L^a x L^b -> L2 for 1/a + 1/b = 1/2."""
    rho = as_fraction(rho)
    if not 0 < rho < 1:
        raise DerivationError(f"rho must lie in (0, 1), got {rho}")
    inv_a = as_fraction(inv_a)
    if not 0 < inv_a < HALF:
        raise DerivationError(f"need 0 < 1/a < 1/2, got {inv_a}")
    order = -(1 - rho) * Fraction(n, 2)
    return BoundednessStatement(
        order, rho, n, lebesgue(inv_a), lebesgue(HALF - inv_a), lebesgue(HALF)
    )


def known_boundedness(rho, n: int = 1, inv_a_values=(Fraction(1, 4),)):
    """The trusted boundedness facts used by the engine.

    Returns the L2 x L2 -> L1 statement followed by one L^a x L^b -> L2
    instance per requested 1/a (the latter is a one-parameter family with
    1/a + 1/b = 1/2).
    """
    return [known_l2l2l1(rho, n)] + [known_split_l2(rho, n, v) for v in inv_a_values]


def multiplier_upper_bound(stmt: BoundednessStatement) -> Constraint:
    """Bounded nonzero multiplier operators force 1/p <= 1/p1 + 1/p2.

    Applies to Lebesgue statements with all three exponents finite and
    positive; any nonpositive class order admits Schwartz multiplier
    symbols, so the constraint follows from the hypothesis alone.
    """
    t = stmt.triple
    for s in (stmt.source1, stmt.source2, stmt.target):
        if s.kind != LEBESGUE:
            raise DerivationError("the multiplier bound needs Lebesgue spaces")
    if t.inv_p1 <= 0 or t.inv_p2 <= 0 or t.inv_p <= 0:
        raise DerivationError("the multiplier bound needs finite exponents")
    if stmt.order > 0:
        raise DerivationError("need a nonpositive class order")
    return Constraint(t.inv_p, t.inv_p1 + t.inv_p2, LE)


def forced_equality(stmt: BoundednessStatement) -> Constraint:
    """Critical-order boundedness on the open Lebesgue range forces equality.

    Hypotheses: Lebesgue sources with reciprocals in (0, 1), a Lebesgue
    target with 1/p > 0, and class order >= the family-"I" critical order
    at (1/p1, 1/p2) (a higher order bounds a larger class, so the critical
    subclass is covered).  Emits 1/p = 1/p1 + 1/p2.
    """
    t = stmt.triple
    if stmt.source1.kind != LEBESGUE or stmt.source2.kind != LEBESGUE:
        raise DerivationError("equality axiom needs Lebesgue sources")
    if stmt.target.kind != LEBESGUE or t.inv_p <= 0:
        raise DerivationError("equality axiom needs a Lebesgue target with p < inf")
    if not (0 < t.inv_p1 < 1 and 0 < t.inv_p2 < 1):
        raise DerivationError(
            f"equality axiom needs 1 < p1, p2 < inf, got {t.point}"
        )
    needed = critical_order(t.point, stmt.n, stmt.rho, family="I")
    if stmt.order < needed:
        raise DerivationError(
            f"order {stmt.order} lies below the critical order {needed}"
        )
    return Constraint(t.inv_p, t.inv_p1 + t.inv_p2, EQ)


def transpose_equality_rewrite(
    constraint: Constraint, triple: ExponentTriple
) -> Constraint:
    """Rewrite the forced equality of a transposed statement onto its source triple.

    Given 1/q = 1/q1 + 1/q2 at the transposed triple (1-z, y, 1-x) this is
    algebraically the relation z = x + y at the original (x, y, z).
    """
    if constraint.relation != EQ:
        raise DerivationError("rewrite applies to equalities only")
    x, y, z = triple.inv_p1, triple.inv_p2, triple.inv_p
    expected_lhs = ONE - x
    expected_rhs = (ONE - z) + y
    if (constraint.lhs, constraint.rhs) != (expected_lhs, expected_rhs):
        raise DerivationError("constraint does not match the transposed triple")
    return Constraint(z, x + y, EQ)


def theta_cancellation(
    constraint: Constraint,
    triple: ExponentTriple,
    base: ExponentTriple,
    theta,
) -> Constraint:
    """Cancel the interpolation weight out of an equality at a mixed triple.

    If the constraint is z~ = x~ + y~ at the triple (1-theta)*base +
    theta*triple and the base satisfies the equality itself, then
    z~ - x~ - y~ = theta * (z - x - y), so the equality at the original
    triple follows from theta > 0.
    """
    theta = as_fraction(theta)
    if not 0 < theta < 1:
        raise DerivationError(f"theta must lie in (0, 1), got {theta}")
    if constraint.relation != EQ:
        raise DerivationError("cancellation applies to equalities only")
    if base.holder_gap != 0:
        raise DerivationError("the interpolation base must satisfy the equality")
    mixed_gap = constraint.lhs - constraint.rhs
    if mixed_gap != theta * triple.holder_gap:
        raise DerivationError("constraint is not the interpolated equality")
    return Constraint(triple.inv_p, triple.inv_p1 + triple.inv_p2, EQ)


def trivial_equality(stmt: BoundednessStatement) -> Constraint:
    """1/inf = 1/inf + 1/inf: the all-infinite triple satisfies the identity."""
    t = stmt.triple
    if not (t.inv_p1 == 0 and t.inv_p2 == 0 and t.inv_p == 0):
        raise DerivationError("only the all-infinite triple is trivial")
    return Constraint(Fraction(0), Fraction(0), EQ)


AXIOMS = {
    "hypothesis": hypothesis_statement,
    "hardy_is_lebesgue": hardy_is_lebesgue,
    "transpose_first": transpose_first,
    "interpolate": interpolate,
    "class_inclusion": class_inclusion,
    "known_l2l2l1": known_l2l2l1,
    "known_split_l2": known_split_l2,
    "multiplier_upper_bound": multiplier_upper_bound,
    "forced_equality": forced_equality,
    "transpose_equality_rewrite": transpose_equality_rewrite,
    "theta_cancellation": theta_cancellation,
    "trivial_equality": trivial_equality,
}


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------


class Conclusion(enum.Enum):
    FORCES_EQUALITY = "ForcesEquality"
    CONTRADICTION = "Contradiction"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Step:
    rule: str
    inputs: tuple
    output: object

    def __str__(self):
        args = ", ".join(str(v) for v in self.inputs)
        return f"{self.rule}({args}) => {self.output}"


@dataclass(frozen=True)
class DerivationTrace:
    triple: ExponentTriple
    rho: Fraction
    n: int
    steps: tuple[Step, ...]
    conclusion: Conclusion
    constraint: Constraint | None

    @property
    def satisfied(self) -> bool:
        return (
            self.conclusion is Conclusion.FORCES_EQUALITY
            and self.constraint is not None
            and self.constraint.satisfied
        )

    def __str__(self):
        lines = [f"derivation for {self.triple}, rho={self.rho}, n={self.n}"]
        lines += [f"  {i}: {s}" for i, s in enumerate(self.steps)]
        lines.append(f"  conclusion: {self.conclusion.value}")
        if self.constraint is not None:
            lines.append(f"  constraint: {self.constraint}")
        return "\n".join(lines)


def replay_trace(trace: DerivationTrace) -> bool:
    """Re-apply every step's rule to its recorded inputs; exact match required."""
    for step in trace.steps:
        rule = AXIOMS.get(step.rule)
        if rule is None:
            raise DerivationError(f"unknown rule {step.rule!r} in trace")
        result = rule(*step.inputs)
        if result != step.output:
            raise DerivationError(
                f"step {step.rule} does not replay: {result} != {step.output}"
            )
    return True


# ---------------------------------------------------------------------------
# the necessity derivation
# ---------------------------------------------------------------------------


def _theta_into_unit_square(point, base_point) -> Fraction:
    """Explicit rational weight keeping (1-theta)*base + theta*point in (0,1)^2.

    The admissible weights form an interval (0, theta*); return theta*/2,
    half the distance to the nearest boundary along the segment.
    """
    cap = ONE
    for c, b in zip(point, base_point):
        if c > b:
            cap = min(cap, (ONE - b) / (c - b))
    return cap / 2


def _append(steps: list[Step], rule: str, *inputs) -> object:
    output = AXIOMS[rule](*inputs)
    steps.append(Step(rule, tuple(inputs), output))
    return output


def _interior_equality(steps: list[Step], stmt: BoundednessStatement) -> Constraint:
    """Forced equality for a statement whose pair lies in (0,1)^2, 1/p > 0.

    Returns the equality constraint on the statement's own triple, or the
    violated multiplier constraint when the upper bound already fails (the
    duality route is then blocked).
    """
    t = stmt.triple
    if stmt.source1.kind == HARDY or stmt.source2.kind == HARDY:
        stmt = _append(steps, "hardy_is_lebesgue", stmt)
        t = stmt.triple
    full = critical_order(t.point, stmt.n, stmt.rho, family="J")
    restricted = critical_order(t.point, stmt.n, stmt.rho, family="I")
    if full == restricted:
        # the critical orders agree away from the strict duality corner
        if stmt.order > restricted:
            stmt = _append(steps, "class_inclusion", stmt, restricted)
        return _append(steps, "forced_equality", stmt)
    # strict duality corner: 1 - x - y is the unique max term
    upper = _append(steps, "multiplier_upper_bound", stmt)
    if not upper.satisfied:
        return upper
    transposed = _append(steps, "transpose_first", stmt)
    dual_order = critical_order(
        transposed.triple.point, stmt.n, stmt.rho, family="I"
    )
    if transposed.order > dual_order:
        transposed = _append(steps, "class_inclusion", transposed, dual_order)
    eq = _append(steps, "forced_equality", transposed)
    return _append(steps, "transpose_equality_rewrite", eq, t)


def _interpolated_equality(
    steps: list[Step], stmt: BoundednessStatement, inv_a=Fraction(1, 4)
) -> Constraint:
    """Pull an off-range statement into (0,1)^2 and force the equality there.

    Interpolates against L2 x L2 -> L1 when x + y >= 1/2 and against the
    L^a x L^b -> L2 family otherwise, with an explicit rational theta at
    half the admissible span.  Returns the equality rewritten back to the
    statement's own triple (or a violated en-route constraint).
    """
    t = stmt.triple
    s = t.inv_p1 + t.inv_p2
    if s >= HALF:
        base = _append(steps, "known_l2l2l1", stmt.rho, stmt.n)
    else:
        base = _append(steps, "known_split_l2", stmt.rho, stmt.n, inv_a)
    base_triple = base.triple
    theta = _theta_into_unit_square(t.point, base_triple.point)
    mixed = _append(steps, "interpolate", base, stmt, theta)
    inner = _interior_equality(steps, mixed)
    if inner.relation == LE:
        return inner  # violated multiplier bound en route; the chain stops here
    return _append(steps, "theta_cancellation", inner, t, base_triple, theta)


def derive_necessity(triple: ExponentTriple, rho, n: int = 1) -> DerivationTrace:
    """Mechanized case analysis forcing 1/p = 1/p1 + 1/p2 (or a contradiction).

    The trace assumes critical-order boundedness for the given reciprocal
    triple and chains the trusted axioms.  Valid cases conclude
    ForcesEquality with the exact constraint evaluated at the triple; the
    structurally invalid endpoint cases (all-infinite sources with p <
    infinity, or p = infinity with a finite source) conclude Contradiction.
    """
    rho = as_fraction(rho)
    if not 0 < rho < 1:
        raise DerivationError(f"rho must lie in (0, 1), got {rho}")
    x, y, z = triple.inv_p1, triple.inv_p2, triple.inv_p

    steps: list[Step] = []
    s0 = _append(steps, "hypothesis", triple, rho, n)

    invalid = (z == 0 and x + y > 0) or (z > 0 and x + y == 0)

    if z == 0 and x + y == 0:
        constraint = _append(steps, "trivial_equality", s0)
        return DerivationTrace(
            triple, rho, n, tuple(steps), Conclusion.FORCES_EQUALITY, constraint
        )

    if z == 0:
        # BMO target: dualize the first slot, then run the finite-p machinery
        if x < 1 and y < 1:
            dual = _append(steps, "transpose_first", s0)
            dual_triple = dual.triple
            hyp_order = critical_order(dual_triple.point, n, rho, family="J")
            if dual.order > hyp_order:
                dual = _append(steps, "class_inclusion", dual, hyp_order)
            constraint = _interpolated_equality(steps, dual)
        else:
            constraint = _interpolated_equality(steps, s0)
    elif x + y == 0:
        constraint = _interpolated_equality(steps, s0)
    elif 0 < x < 1 and 0 < y < 1:
        constraint = _interior_equality(steps, s0)
    else:
        constraint = _interpolated_equality(steps, s0)

    if invalid:
        if constraint is not None and constraint.satisfied:
            raise DerivationError("invalid case unexpectedly satisfiable")
        return DerivationTrace(
            triple, rho, n, tuple(steps), Conclusion.CONTRADICTION, constraint
        )

    # valid cases: normalize a violated multiplier bound to the headline equality
    if constraint is not None and constraint.relation == LE:
        constraint = Constraint(z, x + y, EQ)
    if constraint is None:
        return DerivationTrace(
            triple, rho, n, tuple(steps), Conclusion.INCONCLUSIVE, None
        )
    if constraint.satisfied != (z == x + y):
        raise DerivationError("derived constraint disagrees with the exact identity")
    return DerivationTrace(
        triple, rho, n, tuple(steps), Conclusion.FORCES_EQUALITY, constraint
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _value_record(value) -> object:
    if isinstance(value, Fraction):
        return _frac_str(value)
    if isinstance(value, ExponentTriple):
        return {
            "inv_p1": _frac_str(value.inv_p1),
            "inv_p2": _frac_str(value.inv_p2),
            "inv_p": _frac_str(value.inv_p),
        }
    if isinstance(value, Space):
        return {"kind": value.kind, "inv_p": None if value.inv_p is None else _frac_str(value.inv_p)}
    if isinstance(value, BoundednessStatement):
        return {
            "order": _frac_str(value.order),
            "rho": _frac_str(value.rho),
            "n": value.n,
            "source1": _value_record(value.source1),
            "source2": _value_record(value.source2),
            "target": _value_record(value.target),
        }
    if isinstance(value, Constraint):
        return {
            "lhs": _frac_str(value.lhs),
            "rhs": _frac_str(value.rhs),
            "relation": value.relation,
            "satisfied": value.satisfied,
        }
    if isinstance(value, int):
        return value
    return str(value)


def trace_to_dict(trace: DerivationTrace) -> dict:
    return {
        "triple": _value_record(trace.triple),
        "rho": _frac_str(trace.rho),
        "n": trace.n,
        "steps": [
            {
                "rule": s.rule,
                "inputs": [_value_record(v) for v in s.inputs],
                "output": _value_record(s.output),
            }
            for s in trace.steps
        ],
        "conclusion": trace.conclusion.value,
        "constraint": None if trace.constraint is None else _value_record(trace.constraint),
        "satisfied": trace.satisfied,
    }


def trace_to_json(trace: DerivationTrace, indent: int = 2) -> str:
    return json.dumps(trace_to_dict(trace), indent=indent)


def trace_to_text(trace: DerivationTrace) -> str:
    """One record per step with rationals in num/den form."""
    lines = [
        f"triple 1/p1={_frac_str(trace.triple.inv_p1)} "
        f"1/p2={_frac_str(trace.triple.inv_p2)} 1/p={_frac_str(trace.triple.inv_p)} "
        f"rho={_frac_str(trace.rho)} n={trace.n}"
    ]
    for i, s in enumerate(trace.steps):
        lines.append(
            f"step {i} | {s.rule} | "
            + json.dumps([_value_record(v) for v in s.inputs])
            + " | "
            + json.dumps(_value_record(s.output))
        )
    lines.append(f"conclusion {trace.conclusion.value}")
    if trace.constraint is not None:
        lines.append(f"constraint {trace.constraint}")
    return "\n".join(lines)
