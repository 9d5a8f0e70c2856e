from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from conftest import rationals
from nicecurves.arith import QuadExtElem, is_square, squarefree_part
from nicecurves.elliptic import Z2xZ2, Z2xZ4
from nicecurves.hyper import known_points_H
from nicecurves.nice import (
    C_to_H,
    DegenerateParameter,
    NiceCurve,
    U_values,
    aux_lemma_curves_check,
    conclude_no_3torsion,
    conic_parameter,
    conic_point,
    critical_values,
    cusp_cubic,
    cusp_cubic_singular_points,
    cusp_param,
    cusp_parameter,
    descent_chain,
    param_L,
    rank2_witnesses,
    rational_critical_point,
    sample_nice_L,
    sextic_condition,
    shifted_psi3,
    special_L,
    squarefree_values,
    torsion_classification,
)

F = Fraction


def test_param_examples():
    assert param_L(3) == (F(8, 5), F(7, 5))
    assert param_L(5) == (F(8, 3), F(7, 3))
    assert (F(8, 5)) ** 2 - F(8, 5) + 1 == F(49, 25)


@pytest.mark.parametrize("t, why", [(2, "L = 1"), (0, "L = 1"), (1, "L = 0"), (-1, "L = 0"), (F(1, 2), "2t - 1 = 0")])
def test_param_degenerate(t, why):
    with pytest.raises(DegenerateParameter) as info:
        param_L(t)
    assert info.value.degeneracy == why


def test_W_normalised_positive():
    L, W = conic_point(F(1, 3))
    assert W < 0
    assert param_L(F(1, 3)) == (L, -W)


def test_special_L_examples():
    nc = special_L(2)
    assert (nc.L, nc.W, nc.r, nc.s) == (F(21, 16), F(19, 16), F(3, 8), F(7, 6))
    assert nc.W**2 == F(361, 256)
    nc = special_L(3)
    assert (nc.L, nc.W, nc.r, nc.s) == (F(8, 3), F(7, 3), F(4, 9), F(2))
    with pytest.raises(DegenerateParameter):
        special_L(1)
    with pytest.raises(DegenerateParameter):
        special_L(0)


def test_nice_curve_invariants():
    for u in (2, 3, F(1, 2), F(5, 7)):
        nc = special_L(u)
        for c in (nc.r, nc.s):
            assert 3 * c * c - 2 * (1 + nc.L) * c + nc.L == 0
        assert nc.r < nc.s and nc.W > 0


@pytest.mark.parametrize("L, d, label", [(F(8, 5), -15, Z2xZ4), (F(8, 5), 2, Z2xZ2), (F(21, 16), -5, Z2xZ4)])
def test_torsion_classification_examples(L, d, label):
    code = torsion_classification(L, d)
    assert code.label == label
    if label == Z2xZ4:
        (w,) = code.witnesses
        assert (w * 4).is_infinity and not (w * 2).is_infinity


def test_torsion_classification_dual_path_500_pairs():
    import random

    rng = random.Random(7)
    pool = squarefree_values(50)
    pairs = 0
    for _, L in sample_nice_L(100):
        dist = squarefree_part(1 - L)
        for d in [dist] + rng.sample(pool, 4):
            code = torsion_classification(L, d)  # raises if the two paths disagree
            assert (code.label == Z2xZ4) == (d == dist)
            pairs += 1
    assert pairs == 500


def test_rational_critical_point_examples():
    c = rational_critical_point(2)
    assert (c.point.x, c.point.y, c.root) == (F(3, 8), F(15, 32), "r")
    assert critical_values(special_L(2)) == {"r": F(225, 1024), "s": F(-49, 1728)}
    c = rational_critical_point(3)
    assert (c.point.x, c.point.y) == (F(4, 9), F(20, 27))
    c = rational_critical_point(F(1, 2))
    assert c.point.curve.a4 == F(-39, 16)
    assert is_square(special_L(F(1, 2)).f(c.point.x)) == c.point.y


def test_rank2_examples():
    w = rank2_witnesses(2)
    assert w.Q.point.x == QuadExtElem(F(7, 6), 0, -3)
    assert w.Q.point.y == QuadExtElem(0, F(7, 72), -3)
    assert F(-49, 1728) == -3 * F(7, 72) ** 2
    assert w.ok
    assert (w.Q.point.conjugate() + w.Q.point).is_infinity
    w = rank2_witnesses(3)
    assert w.Q.point.y == QuadExtElem(0, F(2, 3), -3)
    assert special_L(3).f(F(2)) == F(-4, 3)


def test_aux_lemma_curves():
    reps = {r.claim: r for r in aux_lemma_curves_check()}
    assert all(r.passed for r in reps.values())
    assert reps["lemma4t1.rank0"].status == "TRUSTED-INPUT"
    assert reps["lemma4t2.rank0"].source
    J = reps["lemma4t2.C"].witnesses["J_torsion"]
    assert len(J) == 4


def test_descent_chain_examples():
    w = descent_chain(F(8, 5), 2)
    assert (w.A, w.B) == (F(11, 10), F(49, 100))
    assert w.A**2 - 4 * w.B == F(-3, 4)
    assert all(w.identities.values())
    assert not descent_chain(F(8, 5), 1).on_cusp_cubic


def test_shifted_quartic_symbolic():
    L, x = sympy.symbols("L x")
    psi = 3 * x**4 - 4 * (1 + L) * x**3 + 6 * L * x**2 - L**2
    shifted = sympy.expand(psi.subs(x, x + (L + 1) / 3))
    w2 = L**2 - L + 1
    closed = 3 * x**4 - 2 * w2 * x**2 - sympy.Rational(4, 9) * (2 * L - 1) * (L + 1) * (L - 2) * x - w2**2 / 9
    assert sympy.expand(shifted - closed) == 0
    A, B = (2 * L - 1) / x, w2 / x**2
    assert sympy.simplify(A**2 - 4 * B + 3 / x**2) == 0
    assert sympy.simplify(x**4 * cusp_cubic(A, B) + 9 * closed) == 0


def test_cusp_membership_both_directions():
    # at a genuine (irrational) root the cubic vanishes: check over an algebraic x
    L = sympy.Rational(8, 5)
    x = sympy.Symbol("x")
    poly = sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * x**k
                          for k, c in enumerate(shifted_psi3(F(8, 5)).coeffs)), x)
    root = sympy.CRootOf(poly, 0)
    A, B = (2 * L - 1) / root, (L**2 - L + 1) / root**2
    assert abs(sympy.N(cusp_cubic(A, B), 50)) < 1e-40


def test_cusp_param_examples():
    assert (cusp_param(0).A, cusp_param(0).B) == (3, 9)
    assert (cusp_param(1).A, cusp_param(1).B) == (2, 5)
    assert (cusp_param(3).A, cusp_param(3).B) == (-6, 9)
    assert cusp_cubic_singular_points() == [(F(3), F(9))]
    assert cusp_cubic(F(-3), F(9, 2)) != 0


@settings(max_examples=1000)
@given(rationals(10**4, 10**4))
def test_cusp_param_on_S_and_smooth(t):
    P = cusp_param(t)
    assert cusp_cubic(P.A, P.B) == 0
    dA, dB = 12 * P.A**2 - 12 * P.B, 2 * P.B - 12 * P.A + 18
    assert (dA == 0 and dB == 0) == (t == 0)
    assert cusp_parameter(P) == t


@pytest.mark.parametrize("u, v", [(0, 1), (1, 4), (F(1, 3), F(4, 9))])
def test_sextic_examples(u, v):
    assert sextic_condition(u).v == v


def test_sextic_none():
    assert sextic_condition(2).v is None


def test_C_to_H_examples():
    listed = set(known_points_H())
    P = C_to_H(1, 4, 1)
    assert P.is_infinite and P.triple() == (1, -1, 0)
    P = C_to_H(0, 1, 1)
    assert P.triple() == (-1, -1, 1) and P in listed
    P = C_to_H(3, 4, 9)
    assert P in listed
    with pytest.raises(ValueError):
        C_to_H(1, 1, 1)


def test_U_values_from_H():
    assert U_values() == [-1, F(-1, 3), 0, F(1, 3), 1]


def test_conclude_no_3torsion():
    rep = conclude_no_3torsion()
    assert rep.passed
    assert rep.witnesses["branches"]["0"].startswith("A^2 - 4B = 0")
    assert "= 1" in rep.witnesses["branches"]["1"]
    assert "= 1" in rep.witnesses["branches"]["-1/3"]
    bad = conclude_no_3torsion([2])
    assert bad.status == "FAIL"
    assert bad.witnesses["first_failure"]["check"] == "U = 2"


@settings(max_examples=1000)
@given(rationals(10**3, 10**3))
def test_param_round_trip(t):
    if t in (0, 1, -1, 2, F(1, 2)):
        return
    L, W = conic_point(t)
    assert W * W == L * L - L + 1
    assert conic_parameter(L, W) == t
    assert NiceCurve.from_L(L).W == abs(W)


@settings(max_examples=100)
@given(rationals(60, 60).filter(lambda u: u not in (0, 1, -1)))
def test_exactly_one_square_critical_value(u):
    nc = special_L(u)
    vals = list(critical_values(nc).values())
    squares = [is_square(v) is not None for v in vals]
    minus3 = [is_square(v / -3) is not None for v in vals]
    assert sorted(squares) == [False, True]
    assert squares == [not m for m in minus3]
