"""One-vertex module checks: action tables, YD axiom, dual action, and the
r-fold commutator identity."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nicholsw.braided import BraidingMatrix, TensorElement, shuffle
from nicholsw.nichols import ASYMMETRIC, SYMMETRIC, build
from nicholsw.scalars import CycScalar
from nicholsw.ydmod import (
    YDVertex,
    adjoint_act,
    adjoint_act_element,
    adjoint_act_tensor,
    check_action_table,
    check_commutator_identity,
    check_dual_ideal,
    check_yd_axiom,
    coact,
    dual_act,
    dual_bracket_tensor,
    dual_strip,
    dual_word_strip,
    module_element,
    monodromy,
    monodromy_tensor,
)

_ALGS = {}


def _alg(case, p, t):
    key = (case, p, t)
    if key not in _ALGS:
        _ALGS[key] = build(case, p, t)
    return _ALGS[key]


def _braiding(case, p, t):
    if case == ASYMMETRIC:
        return BraidingMatrix.asymmetric(p, t)
    return BraidingMatrix.symmetric(p, t)


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,t", [(2, 0), (2, 1), (3, 0), (3, 2)])
@pytest.mark.parametrize("labels", [(0, 0), (1, 2), (3, 5)])
def test_action_table_matches_closed_forms(case, p, t, labels):
    alg = _alg(case, p, t)
    report = check_action_table(alg, YDVertex(case, p, labels))
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p", [2, 3])
def test_vertex_labels_enter_modulo_p(case, p):
    alg = _alg(case, p, 1)
    v1 = YDVertex(case, p, (1, 2))
    v2 = YDVertex(case, p, (1 + p, 2 + p))
    for letter in (0, 1):
        for lab in alg.basis:
            a = adjoint_act(letter, module_element(alg, v1, lab)).coeffs
            b = adjoint_act(letter, module_element(alg, v2, lab)).coeffs
            assert a == b, (letter, lab)


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p", [2, 3])
def test_yd_axiom_on_all_basis_vectors(case, p):
    alg = _alg(case, p, 1)
    report = check_yd_axiom(alg, YDVertex(case, p, (1, 2)))
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
def test_adjoint_is_an_algebra_action(case):
    # (x sh y) |> u = x |> (y |> u) for the general-element action
    p, t = 3, 1
    alg = _alg(case, p, t)
    v = YDVertex(case, p, (2, 1))
    words = [(0,), (1,), (0, 1), (1, 1), (1, 0)]
    for w1 in words:
        for w2 in words:
            x1 = TensorElement.from_word(p, w1)
            x2 = TensorElement.from_word(p, w2)
            for lab in alg.basis:
                u = alg.reps[lab]
                lhs = adjoint_act_element(alg.Q, v, shuffle(alg.Q, x1, x2), u)
                rhs = adjoint_act_element(alg.Q, v, x1, adjoint_act_element(alg.Q, v, x2, u))
                assert lhs == rhs, (w1, w2, lab)


def test_coaction_is_the_coproduct():
    alg = _alg(ASYMMETRIC, 3, 1)
    v = YDVertex(ASYMMETRIC, 3, (0, 0))
    one = CycScalar.one(3)
    unit = alg.unit_label
    assert coact(module_element(alg, v, unit)) == {(unit, unit): one}
    # deconcatenation of the divided F powers
    split = coact(module_element(alg, v, ("F", 2)))
    assert split == {
        (("F", 0), ("F", 2)): one,
        (("F", 1), ("F", 1)): one,
        (("F", 2), ("F", 0)): one,
    }


def test_dual_generator_action_examples():
    alg = _alg(ASYMMETRIC, 3, 1)
    v = YDVertex(ASYMMETRIC, 3, (1, 1))
    one = CycScalar.one(3)
    # B* pairs the leading B off B.V
    assert dual_act(0, module_element(alg, v, ("FB", 1))).coeffs == {alg.unit_label: one}
    # F* lowers the divided F powers with unit coefficient
    for n in (1, 2):
        assert dual_act(1, module_element(alg, v, ("F", n))).coeffs == {("F", n - 1): one}
    # no leading-B term in the coproduct of F^(n)
    assert dual_act(0, module_element(alg, v, ("F", 2))).is_zero()


def test_monodromy_factors_on_single_letters():
    p, t = 3, 1
    alg = _alg(ASYMMETRIC, p, t)
    v = YDVertex(ASYMMETRIC, p, (0, 0))
    B = module_element(alg, v, ("FB", 1))
    F = module_element(alg, v, ("F", 1))
    one = CycScalar.one(p)
    # loop of B around B.V: q11^2 = 1; around F.V: q12 q21 = q^-2
    assert monodromy(B, 0).coeffs == {("FB", 1): one}
    assert monodromy(F, 0).coeffs == {("F", 1): CycScalar.q_power(p, -2)}
    # loop of F around F.V: q22^2 = q^4
    assert monodromy(F, 1).coeffs == {("F", 1): CycScalar.q_power(p, 4)}


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,t", [(2, 1), (3, 2)])
def test_dual_ideal_annihilates_and_commutes(case, p, t):
    alg = _alg(case, p, t)
    report = check_dual_ideal(alg, YDVertex(case, p, (1, 2)))
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,t", [(2, 0), (2, 1), (3, 1)])
def test_single_dual_commutator_is_the_monodromy_defect(case, p, t):
    # dF_i (F_j |>) - q_ji (F_j |>) dF_i = delta_ij (1 - loop_j) on the basis
    alg = _alg(case, p, t)
    Q = alg.Q
    v = YDVertex(case, p, (2, 1))
    for i in (0, 1):
        for j in (0, 1):
            for lab in alg.basis:
                x = alg.reps[lab]
                lhs = dual_strip(i, adjoint_act_tensor(Q, v, j, x)) - adjoint_act_tensor(
                    Q, v, j, dual_strip(i, x)
                ).scale(Q.phase(j, i))
                if i == j:
                    rhs = x - monodromy_tensor(Q, v, j, x)
                else:
                    rhs = TensorElement.zero(p)
                assert lhs == rhs, (i, j, lab)


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_commutator_identity_p2(case, r):
    p, t = 2, 1
    Q = _braiding(case, p, t)
    v = YDVertex(case, p, (1, 3))
    for s in range(r, 5):
        report = check_commutator_identity(Q, v, r, s)
        assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
def test_commutator_identity_p3_spot(case):
    Q = _braiding(case, 3, 2)
    v = YDVertex(case, 3, (2, 1))
    for r, s in ((1, 2), (2, 3), (3, 4)):
        report = check_commutator_identity(Q, v, r, s)
        assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
def test_dual_bracket_is_a_braided_right_derivation(case):
    p = 3
    alg = _alg(case, p, 1)
    Q = alg.Q
    v = YDVertex(case, p, (2, 1))
    rng = random.Random(20260823)
    for _ in range(40):
        r = rng.randint(2, 3)
        d = tuple(rng.randint(0, 1) for _ in range(r))
        j = rng.randint(0, 1)
        w = tuple(rng.randint(0, 1) for _ in range(rng.randint(r, r + 3)))
        x = TensorElement.from_word(p, w)
        whole = dual_bracket_tensor(Q, v, d, j, x)
        inner = dual_word_strip(d[:-1], dual_bracket_tensor(Q, v, d[-1:], j, x))
        outer = dual_bracket_tensor(Q, v, d[:-1], j, dual_strip(d[-1], x)).scale(
            Q.phase(j, d[-1])
        )
        assert whole == inner + outer, (d, j, w)


@settings(max_examples=30, deadline=None)
@given(
    w=st.lists(st.integers(0, 1), min_size=0, max_size=4).map(tuple),
    letter=st.integers(0, 1),
    labels=st.tuples(st.integers(0, 5), st.integers(0, 5)),
)
def test_letter_action_is_the_two_sided_shuffle_defect(w, letter, labels):
    # x |> (w (x) V) = x sh w - (loop phase) w sh x, on arbitrary words
    p, t = 3, 1
    Q = BraidingMatrix.asymmetric(p, t)
    v = YDVertex(ASYMMETRIC, p, labels)
    x = TensorElement.from_word(p, (letter,))
    u = TensorElement.from_word(p, w)
    e = sum(Q.exp(letter, l) for l in w) + 2 * v.crossing_exp(letter)
    expected = shuffle(Q, x, u) - shuffle(Q, u, x).scale(Q.q(e))
    assert adjoint_act_tensor(Q, v, letter, u) == expected
