import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import ideal, polynomials, ring
from lefschetz_lab import LocalIdeal, length_artinian
from lefschetz_lab.invariants import (
    GenericForms,
    InvariantRecord,
    StabilizationError,
    find_parameters,
    fit_leading_difference,
    has_socle,
    parameter_multiplicity,
    ring_invariants,
    regular_sequence_check,
    socle_length,
    system_of_parameters_check,
)


def test_cusp_record(Q2):
    rec = ring_invariants(ideal(Q2, "x^2 - y^3"))
    assert (rec.dimension, rec.embedding_dimension, rec.depth, rec.multiplicity) == (1, 2, 1, 2)
    assert (rec.regular, rec.cohen_macaulay, rec.gorenstein) == (False, True, True)


def test_embedded_point_has_depth_zero(Q2):
    I = ideal(Q2, "x^2", "x*y")
    rec = ring_invariants(I)
    assert (rec.dimension, rec.depth) == (1, 0)
    assert has_socle(I)
    assert rec.cohen_macaulay is False


def test_artinian_gorenstein_flags(Q2):
    rec = ring_invariants(ideal(Q2, "x^2", "y^2"))
    assert (rec.dimension, rec.length, rec.gorenstein) == (0, 4, True)
    assert socle_length(ideal(Q2, "x^2", "y^2")) == 1
    m2 = ideal(Q2, "x^2", "x*y", "y^2")
    assert ring_invariants(m2).gorenstein is False
    assert socle_length(m2) == 2


def test_regular_rings(Q2):
    rec = ring_invariants(LocalIdeal(Q2, ()))
    assert (rec.dimension, rec.depth, rec.regular, rec.cohen_macaulay) == (2, 2, True, True)
    rec = ring_invariants(ideal(Q2, "x - y^2"))
    assert (rec.dimension, rec.embedding_dimension, rec.regular) == (1, 1, True)


def test_node_is_a_complete_intersection(Q2):
    rec = ring_invariants(ideal(Q2, "y^2 - x^2 - x^3"))
    assert (rec.multiplicity, rec.cohen_macaulay, rec.gorenstein) == (2, True, True)


def test_two_planes_meeting_in_a_point_are_not_cm():
    ctx = ring(0, 3).with_variables(("x", "y", "z", "w"))
    rec = ring_invariants(ideal(ctx, "x*z", "x*w", "y*z", "y*w"))
    assert (rec.dimension, rec.depth, rec.cohen_macaulay) == (2, 1, False)
    # the same answer from colength against e(q): two planes give 3 > 2
    I = ideal(ctx, "x*z", "x*w", "y*z", "y*w")
    q = find_parameters(I, 2, 0)
    assert (length_artinian(I + q), parameter_multiplicity(I, q, 10)) == (3, 2)


def test_unit_ideal_is_rejected(Q2):
    with pytest.raises(ValueError):
        ring_invariants(ideal(Q2, "1 + x"))


def test_regular_sequence_examples(Q2):
    assert regular_sequence_check(LocalIdeal(Q2, ()), [Q2.parse("x"), Q2.parse("y")]) == [True, True]
    assert regular_sequence_check(ideal(Q2, "x*y"), [Q2.parse("x")]) == [False]
    assert regular_sequence_check(ideal(Q2, "x^2 - y^3"), [Q2.parse("y")]) == [True]
    with pytest.raises(ValueError):
        regular_sequence_check(ideal(Q2, "x*y"), [Q2.parse("1 + x")])


def test_system_of_parameters_examples(Q2):
    cusp = ideal(Q2, "x^2 - y^3")
    assert system_of_parameters_check(cusp, [Q2.parse("y")])
    assert system_of_parameters_check(cusp, [Q2.parse("x")])
    assert not system_of_parameters_check(ideal(Q2, "x*y"), [Q2.parse("x")])
    with pytest.raises(ValueError):
        system_of_parameters_check(cusp, [Q2.parse("x"), Q2.parse("y")])


def test_fit_leading_difference():
    assert fit_leading_difference([1, 3, 5, 7, 9, 11], 1) == 2
    # chi of a regular 2-dimensional ring: second difference 1, multiplicity 1
    assert fit_leading_difference([1, 3, 6, 10, 15, 21], 2) == 1
    with pytest.raises(StabilizationError):
        fit_leading_difference([1, 3, 4, 5], 0, window=5)


def test_small_dmax_leaves_multiplicity_undetermined(Q2):
    rec = ring_invariants(ideal(Q2, "x^2 - y^3"), d_max=2)
    assert rec.multiplicity is None
    assert any("d_max" in m for m in rec.diagnostics)


def test_artinian_multiplicity_is_the_length(Q2):
    rec = ring_invariants(ideal(Q2, "x^2 - y^3", "x*y"), d_max=3)
    assert rec.multiplicity == 5


def test_generic_forms_are_seeded(Q2):
    assert GenericForms(3, "depth").vector(6) == GenericForms(3, "depth").vector(6)
    assert GenericForms(3, "depth").vector(6) != GenericForms(4, "depth").vector(6)
    assert GenericForms(3, "depth").vector(6) != GenericForms(3, "sop").vector(6)
    # the same seed gives the same integer forms in every characteristic
    F7 = ring(7)
    f0 = GenericForms(3, "depth").linear_form(Q2)
    f7 = GenericForms(3, "depth").linear_form(F7)
    assert f0.change_context(F7) == f7


def test_record_json_round_trip(Q2):
    rec = ring_invariants(ideal(Q2, "x^2 - y^3"))
    assert InvariantRecord.from_json(rec.to_json()) == rec
    assert ring_invariants(ideal(Q2, "x^2 - y^3")).to_json()["length"] == "infinite"


@st.composite
def small_ideals(draw):
    ctx = ring(draw(st.sampled_from([0, 7])), draw(st.integers(1, 3)))
    k = draw(st.integers(0, 3))
    gens = [draw(polynomials(ctx, max_deg=3, max_terms=3, min_order=1)) for _ in range(k)]
    return LocalIdeal(ctx, tuple(gens))


@given(small_ideals(), st.integers(0, 3))
def test_depth_dim_embdim_chain(I, seed):
    rec = ring_invariants(I, 6, seed)
    assert rec.depth is None or rec.depth <= rec.dimension <= rec.embedding_dimension
    assert all(a <= b for a, b in zip(rec.hilbert_samuel, rec.hilbert_samuel[1:]))
    if rec.regular:
        assert rec.cohen_macaulay and rec.gorenstein
    if rec.gorenstein:
        assert rec.cohen_macaulay
    if rec.cohen_macaulay:
        assert rec.depth == rec.dimension


@given(small_ideals(), st.integers(0, 5))
def test_seed_determinism(I, seed):
    assert ring_invariants(I, 6, seed) == ring_invariants(I, 6, seed)


@settings(max_examples=25)
@given(small_ideals(), st.integers(0, 3))
def test_cm_flag_matches_parameter_multiplicity(I, seed):
    # depth = dim against the independent criterion length(R/q) = e(q)
    rec = ring_invariants(I, 6, seed)
    if rec.regular or rec.dimension == 0 or rec.cohen_macaulay is None:
        return
    q = find_parameters(I, rec.dimension, seed)
    assume(q is not None)
    colength = length_artinian(I + q)
    try:
        e_q = parameter_multiplicity(I, q, 10)
    except StabilizationError:
        assume(False)
    assert rec.cohen_macaulay == (colength == e_q)
