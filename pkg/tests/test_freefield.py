"""Free-field checks: momentum lattices, Wick OPEs, screening kernels,
current families, W-generators, the Wakimoto dictionary, and reduction."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nicholsw.freefield import (
    ASYMMETRIC,
    OPPOSITE,
    SYMMETRIC,
    ConstraintFailure,
    FFField,
    NonIntegerMonodromy,
    antiderivative,
    apply_mff_operator,
    central_charge,
    charge_primary,
    charge_primary_weight,
    check_current_opes,
    check_wakimoto,
    conformal_weight,
    dimension_formulas,
    extremal_vertex,
    extremal_weight,
    generator_weight,
    half_lattice_phase,
    hamiltonian_reduce,
    matter_weight,
    mode_action,
    multiplet_size,
    normal_product,
    ope_coefficient,
    ope_singular_part,
    screening_action,
    solve_momenta,
    wakimoto_map,
    weyl_reflect,
)
from nicholsw.scalars import CycScalar, LevelScalar

LATTICES = [
    (ASYMMETRIC, 2, 0),
    (ASYMMETRIC, 3, 0),
    (ASYMMETRIC, 2, 1),
    (SYMMETRIC, 2, -1),
    (SYMMETRIC, 3, -1),
]

F = Fraction


def _mono(system, coeff, *symbols, beta=None):
    """coeff * d^{m_1} phi_{a_1} ... e^{beta . phi} as a single Wick monomial."""
    X = system.one() if beta is None else system.exponential(beta)
    for a, m in symbols:
        X = X * system.boson(a, m)
    return X.scale(F(coeff))


# ---------------------------------------------------------------------------
# Momentum lattices
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("case,p,j", LATTICES + [(OPPOSITE, 2, 0), (OPPOSITE, 3, 1)])
def test_momentum_lattice_duality(case, p, j):
    system = solve_momenta(case, p, j)
    shift = 1 if case == SYMMETRIC else 2
    assert system.level == F(1, p) + j - shift
    for a in range(3):
        for b in range(3):
            assert system.pair(system.omega[a], system.alpha[b]) == int(a == b)


@pytest.mark.parametrize(
    "case,p,j",
    [(ASYMMETRIC, 2, -1), (SYMMETRIC, 2, -2), (OPPOSITE, 3, -1), ("other", 2, 0), (ASYMMETRIC, 1, 0)],
)
def test_momentum_lattice_rejects(case, p, j):
    with pytest.raises(ConstraintFailure):
        solve_momenta(case, p, j)


def _signature(system):
    return (system.case, system.p, system.j)


@pytest.mark.parametrize("p,j", [(2, 1), (3, 0), (3, 1)])
def test_weyl_reflection_orbit(p, j):
    asym = solve_momenta(ASYMMETRIC, p, j)
    symm = solve_momenta(SYMMETRIC, p, j - 1)
    opp = solve_momenta(OPPOSITE, p, j)
    # the two reflections tie the three families into a single orbit
    assert _signature(weyl_reflect(symm, 1)) == _signature(asym)
    assert _signature(weyl_reflect(asym, 1)) == _signature(symm)
    assert _signature(weyl_reflect(symm, 2)) == _signature(opp)
    assert _signature(weyl_reflect(opp, 2)) == _signature(symm)
    assert _signature(weyl_reflect(asym, 2)) == _signature(asym)
    assert _signature(weyl_reflect(opp, 1)) == _signature(opp)


@pytest.mark.parametrize("case,p,j", LATTICES + [(OPPOSITE, 2, 0), (OPPOSITE, 3, 1)])
def test_weyl_reflection_invariants(case, p, j):
    # p and the level are orbit invariants even at the degenerate lattices
    # where two families share one Gram matrix and the labels can collapse
    system = solve_momenta(case, p, j)
    for i in (1, 2):
        image = weyl_reflect(system, i)
        assert image.p == p and image.level == system.level


# ---------------------------------------------------------------------------
# Field arithmetic
# ---------------------------------------------------------------------------

_SYSTEM = solve_momenta(ASYMMETRIC, 2, 0)

_symbol_st = st.tuples(st.integers(0, 2), st.integers(1, 3))
_field_st = st.builds(
    lambda monos, beta: sum(
        (_mono(_SYSTEM, c, *syms, beta=beta) for c, syms in monos),
        _SYSTEM.zero(),
    ),
    st.lists(
        st.tuples(st.fractions(min_value=-3, max_value=3), st.lists(_symbol_st, max_size=3)),
        min_size=1,
        max_size=4,
    ),
    st.tuples(*[st.integers(-2, 2).map(F) for _ in range(3)]),
)


@settings(max_examples=40, deadline=None)
@given(X=_field_st, Y=_field_st)
def test_derivative_is_a_wick_derivation(X, Y):
    assert (X * Y).derivative() == X.derivative() * Y + X * Y.derivative()


_small_field_st = st.builds(
    lambda monos, beta: sum(
        (_mono(_SYSTEM, c, *syms, beta=beta) for c, syms in monos),
        _SYSTEM.zero(),
    ),
    st.lists(
        st.tuples(
            st.fractions(min_value=-3, max_value=3),
            st.lists(st.tuples(st.integers(0, 2), st.integers(1, 2)), max_size=2),
        ),
        min_size=1,
        max_size=3,
    ),
    st.tuples(*[st.integers(-1, 1).map(F) for _ in range(3)]),
)


@settings(max_examples=25, deadline=None)
@given(X=_small_field_st)
def test_antiderivative_round_trip(X):
    dX = X.derivative()
    Y = antiderivative(dX)
    assert Y is not None
    assert Y.derivative() == dX


@settings(max_examples=30, deadline=None)
@given(X=_field_st, c=st.fractions(min_value=-5, max_value=5))
def test_proportionality_detects_scaling(X, c):
    if X.is_zero():
        assert X.proportionality(X) == 0
    else:
        if c:
            assert X.scale(c).proportionality(X) == c
        assert (X + X.scale(1)).proportionality(X) == 2


def test_antiderivative_rejects_non_derivatives():
    # d^2 phi_0 is a total derivative; (d phi_0)^2 alone is not
    assert antiderivative(_SYSTEM.boson(0, 2)) is not None
    assert antiderivative(_SYSTEM.boson(0) * _SYSTEM.boson(0)) is None


def test_normal_product_guards_monodromy():
    e = _SYSTEM.exponential((F(1, 2), F(0), F(0)))
    with pytest.raises(NonIntegerMonodromy):
        normal_product(e, e)


# ---------------------------------------------------------------------------
# OPE structure identities
# ---------------------------------------------------------------------------

def _nth(A, B, n):
    return ope_coefficient(A, B, -n - 1)


def test_ope_skew_symmetry(current_family):
    cur = current_family(ASYMMETRIC, 2, 0)
    fields = [cur.Jp, cur.Jz, cur.Jm, cur.T]
    for A in fields:
        for B in fields:
            for n in range(0, 4):
                rhs = cur.system.zero()
                sign = (-1) ** (n + 1)
                fact = 1
                for t in range(0, 8):
                    term = _nth(A, B, n + t)
                    for _ in range(t):
                        term = term.derivative()
                    rhs = rhs + term.scale(F(sign, fact))
                    sign = -sign
                    fact *= t + 1
                assert _nth(B, A, n) == rhs, (n,)


def test_zero_mode_products_represent_commutators(current_family):
    cur = current_family(ASYMMETRIC, 2, 0)
    fields = [cur.Jp, cur.Jz, cur.Jm]
    for a in fields:
        for b in fields:
            for c in fields + [cur.T]:
                lhs = _nth(a, _nth(b, c, 0), 0) - _nth(b, _nth(a, c, 0), 0)
                assert lhs == _nth(_nth(a, b, 0), c, 0)


# ---------------------------------------------------------------------------
# Current families and screening kernels
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("case,p,j", LATTICES)
def test_current_opes(case, p, j, current_family):
    report = check_current_opes(current_family(case, p, j))
    assert report.ok, report.summary()


@pytest.mark.parametrize("case,p,j", LATTICES)
@pytest.mark.parametrize("which", [1, 2])
def test_short_screening_kernels(case, p, j, which, current_family):
    cur = current_family(case, p, j)
    kernel = [cur.T, cur.jp, cur.jm, cur.Jp, cur.Jm]
    kernel += [charge_primary(cur.system, h) for h in (1, 2)]
    for X in kernel:
        assert screening_action(which, X).is_zero()


def test_central_charges_at_bottom(current_family):
    cur = current_family(ASYMMETRIC, 2, 0)
    assert central_charge(cur.T) == -10
    assert central_charge(cur.Tmatter) == -2


@pytest.mark.parametrize("case,p,j", LATTICES)
def test_long_screening_commutes_with_short(case, p, j):
    system = solve_momenta(case, p, j)
    S = system.screening_current("long")
    for which in (1, 2):
        residue = ope_coefficient(S, system.screening_current(which), -1)
        Y = antiderivative(residue)
        assert Y is not None and Y.derivative() == residue


def test_symmetric_long_screening_prefactor_routes(current_family):
    # dA1 e^{beta} and -dA2 e^{beta} differ by a total derivative, so both
    # prefactors define the same screening action
    system = solve_momenta(SYMMETRIC, 2, -1)
    beta = tuple(
        -(a + b) / (system.level + 2)
        for a, b in zip(system.alpha[0], system.alpha[1])
    )
    S1 = system.screening_current("long")
    S2 = -(system.gradient(system.alpha[1]) * system.exponential(beta))
    diff = S1 - S2
    Y = antiderivative(diff)
    assert Y is not None and Y.derivative() == diff
    cur = current_family(SYMMETRIC, 2, -1)
    for X in (cur.Jm, charge_primary(system, 1)):
        assert ope_coefficient(S1, X, -1) == ope_coefficient(S2, X, -1)


# ---------------------------------------------------------------------------
# Charge primaries
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("case,p,j", LATTICES)
@pytest.mark.parametrize("h", [1, 2])
def test_charge_primary_weight_and_multiplet(case, p, j, h, current_family):
    cur = current_family(case, p, j)
    X = charge_primary(cur.system, h)
    level = LevelScalar.from_rational(cur.system.level)
    assert conformal_weight(cur.Tsug, X) == charge_primary_weight(h, level).rational_value()
    for J in (cur.Jp, cur.Jz, cur.Jm):
        assert mode_action(J, 1, X).is_zero()
    if case == ASYMMETRIC:
        # top of a (2h+1)-fold zero-mode multiplet with J0 eigenvalue h
        assert mode_action(cur.Jp, 0, X).is_zero()
        assert mode_action(cur.Jz, 0, X) == X.scale(h)
        steps, ladder = 2 * h, [cur.Jm]
    else:
        # middle of the multiplet: J0 eigenvalue 0, h more rungs either way
        assert mode_action(cur.Jz, 0, X).is_zero()
        steps, ladder = h, [cur.Jp, cur.Jm]
    for J in ladder:
        end = X
        for _ in range(steps):
            end = mode_action(J, 0, end)
        assert not end.is_zero()
        assert mode_action(J, 0, end).is_zero()


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("s", [1, 2])
@pytest.mark.parametrize("theta", [0, 1])
def test_extremal_vertex_tower(p, s, theta, current_family):
    cur = current_family(ASYMMETRIC, p, 0)
    system = cur.system
    for r in (0, 1, 2):
        V = extremal_vertex(system, s, r, theta)
        assert conformal_weight(cur.Tsug, V) == extremal_weight(p, s, r, theta)
        up = mode_action(cur.Jp, theta - 1, V)
        assert up == extremal_vertex(system, s, r + p, theta)
        down = mode_action(cur.Jm, 1 - theta, V)
        expected = extremal_vertex(system, s, r - p, theta).scale(
            -F(r * (p + r - s), p * p)
        )
        assert down == expected


# ---------------------------------------------------------------------------
# W-generators and explicit regressions
# ---------------------------------------------------------------------------

def _asym_plus_multiplet(system):
    """The exponential top of the triplet and its two zero-mode descendants."""
    p = system.p
    c = F(p, 1 - 2 * p)
    top = system.exponential((F(p), c, c))
    mid = (system.boson(0) + system.boson(1)) * system.exponential((F(p), 0, 0))
    poly = (
        _mono(system, F(1, 2), (0, 1), (0, 1))
        + _mono(system, -1, (0, 2))
        + _mono(system, 1, (0, 1), (1, 1))
        + _mono(system, F(1, 2), (1, 1), (1, 1))
        + _mono(system, -1, (1, 2))
    )
    bot = poly * system.exponential((F(p), -c, -c))
    return top, mid, bot


@pytest.mark.parametrize("p", [2, 3])
def test_asymmetric_plus_triplet(p, w_family, current_family):
    cur = current_family(ASYMMETRIC, p, 0)
    wg = w_family(ASYMMETRIC, p, 0)
    top, mid, bot = _asym_plus_multiplet(cur.system)
    assert wg["W+"] == top
    assert mode_action(cur.Jm, 0, wg["W+"]) == mid
    assert mode_action(cur.Jm, 0, mid) == bot


def test_asymmetric_p2_generators(w_family, current_family):
    cur = current_family(ASYMMETRIC, 2, 0)
    system = cur.system
    wg = w_family(ASYMMETRIC, 2, 0)
    c = F(2, 3)
    w0 = (
        _mono(system, F(-1, 3), (0, 3))
        + _mono(system, 2, (0, 2), (0, 1))
        + _mono(system, F(-4, 3), (0, 1), (0, 1), (0, 1))
    ) * system.exponential((0, -c, -c))
    wm = (_mono(system, 8, (0, 2)) + _mono(system, 8, (0, 1), (0, 1))) * system.exponential(
        (-2, -c, -c)
    )
    assert wg["W0"].proportionality(w0) == 1
    assert wg["W-"].proportionality(wm) == 1
    # middle elements of the two descendant triplets
    mid0 = (
        _mono(system, 1, (0, 2), (0, 2))
        + _mono(system, 1, (0, 3), (0, 1))
        + _mono(system, -2, (0, 2), (0, 1), (0, 1))
        + _mono(system, F(-1, 3), (0, 3), (1, 1))
        + _mono(system, 2, (0, 2), (0, 1), (1, 1))
        + _mono(system, F(-4, 3), (0, 1), (0, 1), (0, 1), (1, 1))
        + _mono(system, F(-1, 6), (0, 4))
    )
    assert mode_action(cur.Jm, 0, wg["W0"]).proportionality(mid0) == 1
    midm = (
        _mono(system, 4, (0, 3))
        + _mono(system, 8, (0, 2), (1, 1))
        + _mono(system, -8, (0, 1), (0, 1), (0, 1))
        + _mono(system, 8, (0, 1), (0, 1), (1, 1))
    ) * system.exponential((-2, 0, 0))
    assert mode_action(cur.Jm, 0, wg["W-"]).proportionality(midm) == 1


def test_asymmetric_p3_generators(w_family, current_family):
    cur = current_family(ASYMMETRIC, 3, 0)
    system = cur.system
    wg = w_family(ASYMMETRIC, 3, 0)
    c = F(3, 5)
    w0 = (
        _mono(system, F(-1, 40), (0, 5))
        + _mono(system, F(3, 4), (0, 3), (0, 2))
        + _mono(system, F(3, 8), (0, 4), (0, 1))
        + _mono(system, F(-27, 8), (0, 2), (0, 2), (0, 1))
        + _mono(system, F(-9, 4), (0, 3), (0, 1), (0, 1))
        + _mono(system, F(27, 4), (0, 2), (0, 1), (0, 1), (0, 1))
        + _mono(system, F(-81, 40), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1))
    ) * system.exponential((0, -c, -c))
    wm = (
        _mono(system, F(3, 2), (0, 4))
        + _mono(system, F(-117, 2), (0, 2), (0, 2))
        + _mono(system, 27, (0, 3), (0, 1))
        + _mono(system, -54, (0, 2), (0, 1), (0, 1))
        + _mono(system, F(-81, 2), (0, 1), (0, 1), (0, 1), (0, 1))
    ) * system.exponential((-3, -c, -c))
    assert wg["W0"].proportionality(w0) == 1
    assert wg["W-"].proportionality(wm) == 1


def test_asymmetric_p2_minus_dual_route(w_family, current_family):
    # the same field through the singular-vector operator on the charge -1
    # primary, kept separate from the screening route above
    cur = current_family(ASYMMETRIC, 2, 0)
    wg = w_family(ASYMMETRIC, 2, 0)
    alt = apply_mff_operator(cur, 2, 2, charge_primary(cur.system, -1))
    assert alt.proportionality(wg["W-"]) == F(3, 32)


def test_symmetric_p2_generators(w_family, current_family):
    cur = current_family(SYMMETRIC, 2, -1)
    system = cur.system
    wg = w_family(SYMMETRIC, 2, -1)
    wm = (
        _mono(system, -1, (0, 4))
        + _mono(system, 42, (0, 2), (0, 2))
        + _mono(system, 24, (0, 2), (1, 2))
        + _mono(system, -24, (0, 3), (0, 1))
        + _mono(system, -12, (0, 3), (1, 1))
        + _mono(system, 24, (0, 1), (0, 1), (1, 2))
        + _mono(system, 24, (0, 2), (0, 1), (0, 1))
        + _mono(system, 24, (0, 2), (0, 1), (1, 1))
        + _mono(system, 24, (0, 2), (1, 1), (1, 1))
        + _mono(system, 24, (0, 1), (0, 1), (0, 1), (0, 1))
        + _mono(system, 48, (0, 1), (0, 1), (0, 1), (1, 1))
        + _mono(system, 24, (0, 1), (0, 1), (1, 1), (1, 1))
    ) * system.exponential((F(-8, 3), F(-4, 3), F(-2, 3)))
    assert wg["W-"].proportionality(wm) == F(1, 6)
    mid0 = (
        _mono(system, 8, (0, 1), (0, 1), (0, 1), (0, 1))
        + _mono(system, 16, (0, 1), (0, 1), (0, 1), (1, 1))
        + _mono(system, -16, (0, 1), (1, 1), (1, 1), (1, 1))
        + _mono(system, 24, (0, 1), (1, 2), (1, 1))
        + _mono(system, -4, (0, 1), (1, 3))
        + _mono(system, -8, (1, 1), (1, 1), (1, 1), (1, 1))
        + _mono(system, -24, (0, 2), (0, 1), (0, 1))
        + _mono(system, -24, (0, 2), (0, 1), (1, 1))
        + _mono(system, 6, (0, 2), (0, 2))
        + _mono(system, 24, (1, 2), (1, 1), (1, 1))
        + _mono(system, -6, (1, 2), (1, 2))
        + _mono(system, 8, (0, 3), (0, 1))
        + _mono(system, 4, (0, 3), (1, 1))
        + _mono(system, -8, (1, 3), (1, 1))
        + _mono(system, -1, (0, 4))
        + _mono(system, 1, (1, 4))
    )
    assert mode_action(cur.Jm, 0, wg["W0"]).proportionality(mid0) == F(-1, 12)


def test_symmetric_p2_minus_wakimoto_route(w_family, current_family):
    system = current_family(SYMMETRIC, 2, -1).system
    wg = w_family(SYMMETRIC, 2, -1)
    mapped = wakimoto_map(
        system,
        [
            (18, (("beta", 1), ("beta", 1)), -2),
            (-12, (("beta", 2), ("beta", 0)), -2),
            (-24, (("phi", 1), ("beta", 1), ("beta", 0)), -2),
            (24, (("phi", 2), ("beta", 0), ("beta", 0)), -2),
            (24, (("phi", 1), ("phi", 1), ("beta", 0), ("beta", 0)), -2),
        ],
    )
    assert mapped.proportionality(wg["W-"]) == 6


@pytest.mark.parametrize("case,p,j", LATTICES)
def test_wakimoto_dictionary(case, p, j):
    report = check_wakimoto(solve_momenta(case, p, j))
    assert report.ok, report.summary()


@pytest.mark.parametrize(
    "case,p,j,weight",
    [(ASYMMETRIC, 2, 0, 4), (ASYMMETRIC, 3, 0, 6), (SYMMETRIC, 2, -1, 4), (SYMMETRIC, 3, -1, 6)],
)
def test_generator_weights_at_bottom(case, p, j, weight, w_family, current_family):
    cur = current_family(case, p, j)
    wg = w_family(case, p, j)
    for name in ("W+", "W0", "W-"):
        assert conformal_weight(cur.Tsug, wg[name]) == weight
    if case == ASYMMETRIC:
        assert weight == generator_weight(p, j)


# ---------------------------------------------------------------------------
# Hamiltonian reduction
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("j", [0, 1])
def test_reduction_momenta_and_degrees(j, w_family):
    p = 2
    wg = w_family(ASYMMETRIC, p, j)
    plus = hamiltonian_reduce(wg["W+"])
    mid = hamiltonian_reduce(wg["W0"])
    minus = hamiltonian_reduce(wg["W-"])
    assert plus.momenta() == [(F(p), 0, 0)]
    assert mid.momenta() == [(F(0), 0, 0)]
    assert minus.momenta() == [(F(-p), 0, 0)]
    p_plus, p_minus = p, j * p + 1
    assert plus.polynomial_degree() == (p_minus - 1) * (3 * p_plus - 1)
    assert mid.polynomial_degree() == (2 * p_plus - 1) * (2 * p_minus - 1)
    assert minus.polynomial_degree() == (p_plus - 1) * (3 * p_minus - 1)


def test_reduction_weight_of_deep_generators(w_family, current_family):
    cur = current_family(ASYMMETRIC, 2, 1)
    wg = w_family(ASYMMETRIC, 2, 1)
    assert conformal_weight(cur.Tsug, wg["W0"]) == generator_weight(2, 1)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def test_matter_weight_closed_form():
    assert matter_weight(1, 1).is_rational() and matter_weight(1, 1).rational_value() == 0
    k = LevelScalar.k()
    assert matter_weight(2, 1) == (k + 2) * F(3, 4) - LevelScalar.from_rational(F(1, 2))
    lvl = LevelScalar.from_rational(F(-3, 2))
    assert matter_weight(2, 2, lvl).rational_value() == F(3, 8) + F(3, 2) - F(3, 2)


def test_counting_formulas():
    assert generator_weight(2, 0) == 4
    assert generator_weight(2, 1) == 20
    assert generator_weight(3, 0) == 6
    assert multiplet_size(2, 0) == 3
    assert multiplet_size(2, 1) == 11
    assert dimension_formulas("generator", p=2, j=1) == 20
    assert dimension_formulas("multiplet", p=3, j=0) == 3
    assert dimension_formulas("extremal", p=2, s=2, r=1, theta=0) == extremal_weight(2, 2, 1, 0)
    with pytest.raises(ValueError):
        dimension_formulas("unknown")


def test_half_lattice_phase():
    for p in (2, 3, 5):
        for m in range(-3, 4):
            assert half_lattice_phase(p, F(m, p)) == CycScalar.q_power(p, m)
    assert half_lattice_phase(2, 1) == CycScalar.from_rational(2, -1)
    with pytest.raises(NonIntegerMonodromy):
        half_lattice_phase(2, F(1, 4))
