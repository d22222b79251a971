"""Construction, tables, and presentation checks for both Nichols algebras."""

import itertools

import pytest

from nicholsw.braided import (
    TensorElement,
    deconcat,
    shuffle,
    symmetrizer,
)
from nicholsw.linalg import LinearSpan, accum
from nicholsw.nichols import (
    ASYMMETRIC,
    SYMMETRIC,
    build,
    check_coproduct_antipode,
    check_mult_table,
    verify_presentation,
)
from nicholsw.scalars import CycScalar


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_dimension_is_4p(case, p):
    alg = build(case, p, 1)
    assert len(alg.basis) == 4 * p
    assert len(alg.reps) == 4 * p


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,t", [(2, 0), (2, 1), (3, 0), (3, 2), (4, 0), (4, 1)])
def test_mult_table_matches_closed_forms(case, p, t):
    report = check_mult_table(build(case, p, t))
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,t", [(2, 0), (2, 1), (3, 0), (3, 2), (4, 0), (4, 1)])
def test_coproduct_antipode_match_closed_forms(case, p, t):
    report = check_coproduct_antipode(build(case, p, t))
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,t", [(2, 0), (2, 1), (3, 0), (3, 1), (4, 1)])
def test_presentation_relations(case, p, t):
    report = verify_presentation(build(case, p, t))
    assert report.ok, report.summary()


def test_top_grade_is_one_dimensional_in_symmetric_case():
    alg = build(SYMMETRIC, 3, 0)
    assert alg.grades[2 * 3] == [("abp", 3)]


def test_serre_combination_killed_by_direct_symmetrizer():
    # the grade-3 ideal element, against the n!-sum symmetrizer (no shortcuts)
    for p, t in ((2, 0), (3, 1)):
        alg = build(ASYMMETRIC, p, t)
        q = lambda e: CycScalar.q_power(p, e)
        serre = (
            TensorElement.from_word(p, (0, 1, 1), q(2 * t))
            - TensorElement.from_word(p, (1, 0, 1), q(t) * (q(1) + q(-1)))
            + TensorElement.from_word(p, (1, 1, 0))
        )
        assert symmetrizer(alg.Q, 3)(serre).is_zero()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p", [2, 3])
def test_rank_nullity_against_direct_symmetrizer(case, p):
    alg = build(case, p, 1)
    one = CycScalar.one(p)
    for n in range(1, 6):
        span = LinearSpan(one)
        for w in itertools.product((0, 1), repeat=n):
            img = symmetrizer(alg.Q, n)(TensorElement.from_word(p, w))
            if img:
                span.add(w, img.terms)
        # rank of the symmetrizer == number of PBW elements at this grade
        assert span.dim == len(alg.grades.get(n, []))


def _tensor_square_product(Q, d1, d2):
    """Braided product of two deconcatenation dicts:
    (a1 (x) a2)(b1 (x) b2) = chi(a2, b1) (a1 * b1) (x) (a2 * b2)."""
    p = Q.p
    out = {}
    for (a1, a2), ca in d1.items():
        for (b1, b2), cb in d2.items():
            chi = Q.q(sum(Q.exp(x, y) for x in a2 for y in b1))
            left = shuffle(Q, TensorElement.from_word(p, a1), TensorElement.from_word(p, b1))
            right = shuffle(Q, TensorElement.from_word(p, a2), TensorElement.from_word(p, b2))
            c = ca * cb * chi
            for w1, c1 in left.terms.items():
                for w2, c2 in right.terms.items():
                    accum(out, c * c1 * c2, {(w1, w2): CycScalar.one(p)})
    return out


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
def test_bialgebra_axiom_on_basis_pairs(case):
    p = 2
    alg = build(case, p, 1)
    labels = list(alg.basis)
    for l1 in labels:
        for l2 in labels:
            x, y = alg.reps[l1], alg.reps[l2]
            lhs = deconcat(shuffle(alg.Q, x, y))
            rhs = _tensor_square_product(alg.Q, deconcat(x), deconcat(y))
            assert lhs == rhs, (l1, l2)


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
def test_structure_constants_independent_of_interning_order(case):
    p = 3
    a = build(case, p, 1)
    b = build(case, p, 1, order_seed=12345)
    for lab in a.basis:
        assert a.antipode_table[lab] == b.antipode_table[lab]
        assert a.coproduct_table[lab] == b.coproduct_table[lab]
    for l1 in a.basis:
        for l2 in a.basis:
            assert a.mult_table[(l1, l2)] == b.mult_table[(l1, l2)]


def test_low_degree_concatenation_expansions():
    p, t = 3, 1
    alg = build(ASYMMETRIC, p, t)
    q = lambda e: CycScalar.q_power(p, e)
    one = CycScalar.one(p)
    # FB^(2) = xi q^-1 BF + FB
    assert alg.reps[("FB", 2)] == TensorElement(
        p, {(0, 1): q(t - 1), (1, 0): one}
    )
    # X^(2) = q^-1 xi^-1 (1 - q^2) FB
    assert alg.reps[("X", 2)] == TensorElement(p, {(1, 0): q(-t - 1) * (one - q(2))})
    # X^(3) = (1 - q^2) FBF + q^-1 xi^-1 (1 - q^4) FFB
    assert alg.reps[("X", 3)] == TensorElement(
        p, {(1, 0, 1): one - q(2), (1, 1, 0): q(-t - 1) * (one - q(4))}
    )
    # BFB^(3) = (1 - q^-2) BFB
    assert alg.reps[("BFB", 3)] == TensorElement(p, {(0, 1, 0): one - q(-2)})


def test_element_arithmetic_uses_tables():
    alg = build(ASYMMETRIC, 3, 0)
    F1 = alg.basis_element(("F", 1))
    F2 = alg.basis_element(("F", 2))
    # F^(1) * F^(2) = <3 choose 1> F^(3) = 0 at p = 3 (top of the F range)
    assert (F1 * F2).is_zero()
    assert (alg.unit() * F1) == F1
    FB1 = alg.basis_element(("FB", 1))
    assert (FB1 * FB1).is_zero()  # B^2 = 0
    assert (F1 * FB1).coeffs.keys() == {("FB", 2)}
