"""Double bosonization checks: dimension, Hopf axioms, the isomorphism and
twist between the two cases, Radford-biproduct cross-checks, and the simple
modules."""

import pytest

from nicholsw.doubleboson import (
    InvalidWeight,
    SigmaMap,
    UElement,
    antipode,
    build_U,
    check_confluence,
    check_dimension,
    check_hopf_axioms,
    check_module_relations,
    check_presentation,
    check_sigma,
    check_sub_bialgebras,
    counit,
    delta,
    element_inverse,
    expected_simple_dimension,
    halfway_subalgebra,
    induced_module,
    radford_coproduct,
    simple_dimension,
    simple_modules,
    twist_check,
)
from nicholsw.nichols import ASYMMETRIC, SYMMETRIC
from nicholsw.scalars import CycScalar

_US = {}


def _U(case, p, xi=1):
    key = (case, p, xi)
    if key not in _US:
        _US[key] = build_U(case, p, xi)
    return _US[key]


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,total", [(2, 1024), (3, 5184)])
def test_dimension_is_64_p4(case, p, total):
    U = _U(case, p)
    assert U.dim == total
    assert check_dimension(U)


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,xi", [(2, 1), (2, -1), (3, 1), (3, -1)])
def test_presentation_relations(case, p, xi):
    report = check_presentation(_U(case, p, xi))
    assert report.ok, report.summary()


def test_xi_must_square_to_one():
    with pytest.raises(ValueError):
        build_U(ASYMMETRIC, 3, 2)


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
def test_straightening_is_confluent(case):
    report = check_confluence(_U(case, 2), n_random=500, seed=11)
    assert report.ok, report.summary()
    report = check_confluence(_U(case, 3), n_random=100, seed=12)
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p,xi", [(2, 1), (2, -1), (3, 1)])
def test_hopf_axioms(case, p, xi):
    report = check_hopf_axioms(_U(case, p, xi), n_random=25, seed=13)
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p", [2, 3])
def test_halfway_subalgebra_relations(case, p):
    report = halfway_subalgebra(_U(case, p))
    assert report.ok, report.summary()


@pytest.mark.parametrize("p", [2, 3])
def test_quantum_sl2_subalgebras_close_under_coproduct(p):
    report = check_sub_bialgebras(_U(ASYMMETRIC, p))
    assert report.ok, report.summary()


@pytest.mark.parametrize("case", [ASYMMETRIC, SYMMETRIC])
@pytest.mark.parametrize("p", [2, 3])
def test_radford_biproduct_formulas(case, p):
    report = radford_coproduct(_U(case, p))
    assert report.ok, report.summary()


@pytest.mark.parametrize("p,xi", [(2, 1), (2, -1), (3, 1)])
def test_sigma_is_a_bijective_algebra_map(p, xi):
    maps = SigmaMap(_U(ASYMMETRIC, p, xi), _U(SYMMETRIC, p, xi))
    report = check_sigma(maps, n_random=20, seed=14)
    assert report.ok, report.summary()


@pytest.mark.parametrize("p,xi", [(2, 1), (2, -1), (3, 1)])
def test_sigma_inductive_identity(p, xi):
    # the alternating (F1 F2)^n combinations map onto C B F^n corrections of
    # F^n, and the image vanishes at n = p
    Ua, Us = _U(ASYMMETRIC, p, xi), _U(SYMMETRIC, p, xi)
    maps = SigmaMap(Ua, Us)
    q = Ua.q
    xis = CycScalar.from_rational(p, xi)
    F1, F2 = Us.generator("F1"), Us.generator("F2")
    B, F, C = Ua.generator("B"), Ua.generator("F"), Ua.generator("C")
    k_inv = Ua.group_element(-1, 0)
    qd = Ua.qdiff()
    for n in range(1, p + 1):
        src = ((F1 * F2).power(n) - (F2 * F1).power(n).scale(xis**n)).scale(
            (qd ** (2 * n)).inverse()
        )
        lhs = maps.forward(src)
        sgn = CycScalar.from_rational(p, (-1) ** n)
        rhs = F.power(n).scale(sgn)
        rhs = rhs + (C * B * F.power(n) * k_inv).scale(
            sgn * xis**n * q(-2 * n + 1) * (q(n) + Ua.one())
        )
        rhs = rhs + (C * F * B * F.power(n - 1) * k_inv).scale(
            CycScalar.from_rational(p, (-1) ** (n + 1))
            * xis ** (n + 1)
            * q(-2 * n)
            * (q(n) + Ua.one())
        )
        assert lhs == rhs, (p, xi, n)
    assert lhs.is_zero()  # n = p


@pytest.mark.parametrize("p,xi", [(2, 1), (2, -1), (3, 1)])
def test_twist_relates_the_coproducts_and_antipodes(p, xi):
    maps = SigmaMap(_U(ASYMMETRIC, p, xi), _U(SYMMETRIC, p, xi))
    report = twist_check(maps)
    assert report.ok, report.summary()


@pytest.mark.parametrize("p", [2, 3])
def test_simple_module_dimension_table(p):
    report, mods = simple_modules(_U(ASYMMETRIC, p))
    assert report.ok, report.summary()
    assert len(mods) == 4 * p**2


def test_expected_dimensions_cover_all_cases():
    assert expected_simple_dimension(3, 2, 0) == 3
    assert expected_simple_dimension(3, 2, 2) == 5
    assert expected_simple_dimension(3, 2, 1) == 8
    assert expected_simple_dimension(3, 3, 2) == 12


def test_highest_weight_eigenvalues():
    # k and K act on the highest-weight vector by beta q^-r and alpha q^(s-1)
    p = 3
    U = _U(ASYMMETRIC, p)
    alpha, beta, s, r = -1, 1, 2, 1
    lam1 = U.q(-r) * CycScalar.from_rational(p, beta)
    lam2 = U.q(s - 1) * CycScalar.from_rational(p, alpha)
    mod = induced_module(U, lam1, lam2)
    hw = U.unit_label
    assert mod.matrices["k"][(hw, hw)] == lam1
    assert mod.matrices["K"][(hw, hw)] == lam2
    assert simple_dimension(mod) == expected_simple_dimension(p, s, r)


def test_module_matrices_define_a_representation():
    U = _U(ASYMMETRIC, 2)
    lam1 = U.q(-1)
    lam2 = -U.q(1)
    report = check_module_relations(induced_module(U, lam1, lam2))
    assert report.ok, report.summary()


def test_invalid_weight_is_rejected():
    U = _U(ASYMMETRIC, 2)
    with pytest.raises(InvalidWeight):
        induced_module(U, U.one() + U.q(1), U.one())


def test_element_inverse_solves_group_and_unipotent_parts():
    U = _U(ASYMMETRIC, 2)
    k, B, C = U.generator("k"), U.generator("B"), U.generator("C")
    x = k + (B * C).scale(U.q(1))
    xi = element_inverse(U, x)
    assert x * xi == U.unit() and xi * x == U.unit()


def test_counit_and_antipode_on_grouplikes():
    U = _U(SYMMETRIC, 2)
    K1 = U.generator("K1")
    assert counit(K1) == U.one()
    assert antipode(K1) == U.group_element(-1, 0)
    assert delta(K1) == {(key1, key1): c for key1, c in K1.coeffs.items()}
