import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilinear_blowup.derivation import (
    BoundednessStatement,
    Conclusion,
    Constraint,
    DerivationError,
    ExponentTriple,
    bmo,
    class_inclusion,
    derive_necessity,
    forced_equality,
    hardy,
    interpolate,
    known_boundedness,
    known_l2l2l1,
    known_split_l2,
    lebesgue,
    replay_trace,
    trace_to_dict,
    trace_to_text,
    transpose_first,
)

HALF = F(1, 2)


def stmt(order, x, y, z, rho=HALF, n=1):
    return BoundednessStatement(F(order), F(rho), n, lebesgue(F(x)), lebesgue(F(y)), lebesgue(F(z)))


def test_transpose_example():
    s = stmt(F(-1, 4), F(1, 4), F(1, 4), F(1, 2))
    t = transpose_first(s)
    assert t.source1 == lebesgue(HALF)
    assert t.source2 == lebesgue(F(1, 4))
    assert t.target == lebesgue(F(3, 4))
    assert (t.order, t.rho) == (s.order, s.rho)


def test_transpose_involution():
    s = stmt(F(-1, 4), F(1, 4), F(1, 3), F(2, 3))
    assert transpose_first(transpose_first(s)) == s


def test_transpose_bmo():
    s = BoundednessStatement(F(-1, 2), HALF, 1, hardy(F(1, 3)), hardy(F(1, 4)), bmo())
    t = transpose_first(s)
    assert t.source1 == hardy(F(1))
    assert t.target == lebesgue(F(2, 3))


def test_transpose_rejects_undualizable():
    with pytest.raises(DerivationError):
        transpose_first(stmt(0, F(1, 2), F(1, 2), F(3, 2)))  # p < 1
    with pytest.raises(DerivationError):
        transpose_first(stmt(0, F(3, 2), F(1, 2), F(1, 2)))  # p1 < 1


def test_interpolate_affine_example():
    s0 = stmt(F(-1, 4), HALF, HALF, 1)  # L2 x L2 -> L1 at order -(1-rho)n/2
    s1 = BoundednessStatement(F(-1, 2), HALF, 1, lebesgue(F(0)), lebesgue(F(0)), lebesgue(F(1, 3)))
    mixed = interpolate(s0, s1, HALF)
    assert mixed.source1.inv_p == F(1, 4)
    assert mixed.source2.inv_p == F(1, 4)
    assert mixed.target.inv_p == F(2, 3)
    assert mixed.order == F(-3, 8)


def test_interpolate_rejects_endpoints():
    s = stmt(F(-1, 4), HALF, HALF, 1)
    with pytest.raises(DerivationError):
        interpolate(s, s, 0)
    with pytest.raises(DerivationError):
        interpolate(s, s, 1)


def test_interpolate_idempotent():
    s = stmt(F(-1, 4), HALF, HALF, 1)
    assert interpolate(s, s, F(1, 3)) == s


def test_known_boundedness():
    facts = known_boundedness(HALF, 1)
    l2l2l1 = facts[0]
    assert l2l2l1.order == F(-1, 4)
    assert (l2l2l1.source1.inv_p, l2l2l1.target.inv_p) == (HALF, F(1))
    split = known_split_l2(HALF, 1, F(1, 4))
    assert split.source1.inv_p + split.source2.inv_p == HALF
    assert split.order == F(-1, 4)
    with pytest.raises(DerivationError):
        known_l2l2l1(0, 1)


def test_forced_equality_examples():
    c = forced_equality(stmt(F(-1, 4), HALF, HALF, 1))
    assert c == Constraint(F(1), F(1)) and c.satisfied
    c = forced_equality(stmt(F(-1, 4), F(1, 4), F(1, 4), F(1, 4)))
    assert not c.satisfied
    with pytest.raises(DerivationError):
        forced_equality(stmt(F(-1, 4), F(1), HALF, 1))  # p1 = 1 not open
    with pytest.raises(DerivationError):
        # order strictly below the critical order: hypothesis too weak
        forced_equality(stmt(F(-1, 3), HALF, HALF, 1))


def test_class_inclusion():
    s = stmt(F(-1, 4), HALF, HALF, 1)
    lowered = class_inclusion(s, F(-1, 2))
    assert lowered.order == F(-1, 2)
    assert class_inclusion(s, s.order) == s
    with pytest.raises(DerivationError):
        class_inclusion(lowered, F(-1, 4))


def test_derive_examples():
    t = derive_necessity(ExponentTriple(HALF, HALF, F(1)), HALF)
    assert t.conclusion is Conclusion.FORCES_EQUALITY and t.satisfied
    assert any(s.rule == "forced_equality" for s in t.steps)

    t = derive_necessity(ExponentTriple(F(0), F(0), F(0)), HALF)
    assert t.conclusion is Conclusion.FORCES_EQUALITY and t.satisfied

    t = derive_necessity(ExponentTriple(F(0), F(0), HALF), HALF)
    assert t.conclusion is Conclusion.CONTRADICTION


def test_derive_rejects_bad_rho():
    with pytest.raises(DerivationError):
        derive_necessity(ExponentTriple(HALF, HALF, F(1)), F(0))
    with pytest.raises(DerivationError):
        derive_necessity(ExponentTriple(HALF, HALF, F(1)), F(1))


def test_duality_route_is_used_in_the_strict_corner():
    # (4, 4, 2): x + y = 1/2 exactly is still the shared boundary, use deeper corner
    t = derive_necessity(ExponentTriple(F(1, 8), F(1, 8), F(1, 4)), HALF)
    assert t.satisfied
    rules = [s.rule for s in t.steps]
    assert "multiplier_upper_bound" in rules and "transpose_first" in rules


def test_all_traces_replay_exactly():
    values = [F(0), F(1, 4), HALF, F(3, 4), F(1), F(3, 2)]
    for x, y, z in itertools.product(values, repeat=3):
        trace = derive_necessity(ExponentTriple(x, y, z), F(1, 3))
        assert replay_trace(trace)


@given(
    st.fractions(min_value=0, max_value=2, max_denominator=16),
    st.fractions(min_value=0, max_value=2, max_denominator=16),
    st.fractions(min_value=0, max_value=2, max_denominator=16),
    st.fractions(min_value=F(1, 8), max_value=F(7, 8), max_denominator=8),
)
@settings(max_examples=150, deadline=None)
def test_dichotomy_property(x, y, z, rho):
    triple = ExponentTriple(x, y, z)
    trace = derive_necessity(triple, rho)
    replay_trace(trace)
    equality = z == x + y
    assert (trace.conclusion is Conclusion.FORCES_EQUALITY and trace.satisfied) == equality
    if not equality:
        violated = trace.constraint is not None and not trace.constraint.satisfied
        assert violated or trace.conclusion is Conclusion.CONTRADICTION


def test_trace_serialization_roundtrip_fields():
    trace = derive_necessity(ExponentTriple(F(1, 4), F(3, 4), F(1)), HALF)
    text = trace_to_text(trace)
    assert "conclusion ForcesEquality" in text
    assert "num" not in text  # rationals rendered as plain num/den values
    data = trace_to_dict(trace)
    assert data["satisfied"] is True
    assert len(data["steps"]) == len(trace.steps)
    for step in data["steps"]:
        assert {"rule", "inputs", "output"} <= set(step)


def test_tampered_trace_fails_replay():
    trace = derive_necessity(ExponentTriple(HALF, HALF, F(1)), HALF)
    bad_step = type(trace.steps[-1])(
        trace.steps[-1].rule, trace.steps[-1].inputs, Constraint(F(0), F(1))
    )
    tampered = type(trace)(
        trace.triple, trace.rho, trace.n,
        trace.steps[:-1] + (bad_step,), trace.conclusion, trace.constraint,
    )
    with pytest.raises(DerivationError):
        replay_trace(tampered)
