import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nicecurves.padic import (
    DiskViolation,
    InsufficientPrecision,
    NonResidue,
    OddValuation,
    PadicNumber,
    PadicSeries,
    antiderivative,
    evaluate_symmetric,
    padic,
    padic_sqrt,
    series_from_poly,
    strassmann_bound,
)

P = 7


def test_padic_sqrt_examples():
    assert padic_sqrt(padic(4, 7)) == 2
    r = padic_sqrt(padic(2, 7))
    assert r.residue() == 3
    assert r * r == 2
    with pytest.raises(NonResidue):
        padic_sqrt(padic(5, 7))
    with pytest.raises(OddValuation):
        padic_sqrt(padic(7 * 2, 7))


def test_padic_sqrt_residue_oracle():
    # exhaustive residue search agrees with the canonical-branch choice
    for a in range(1, P):
        roots = [r for r in range(1, P) if r * r % P == a]
        if not roots:
            with pytest.raises(NonResidue):
                padic_sqrt(padic(a, P))
            continue
        assert padic_sqrt(padic(a, P)).residue() == min(roots)


@settings(max_examples=1000)
@given(st.sampled_from([5, 7, 11, 13]).flatmap(lambda p: st.tuples(st.just(p), st.integers(1, 10**12).filter(lambda n: n % p))))
def test_padic_sqrt_of_square(pn):
    p, n = pn
    x = padic(n, p, 30)
    r = padic_sqrt(x * x)
    assert r == x or r == -x
    assert r * r == x * x
    assert r.prec == 30


def test_antiderivative_examples():
    s = PadicSeries(P, [0, 1])
    a = antiderivative(s)
    assert a[0] == 0 and a[1] == 0 and a[2] == padic(1, P) / 2
    geo = antiderivative(PadicSeries(P, [1] * 5))
    for k in range(5):
        assert geo[k + 1] == padic(1, P) / (k + 1)


def test_antiderivative_precision_drop_at_p():
    s = PadicSeries(P, [padic(1, P, 20)] * P)
    a = antiderivative(s)
    # the coefficient of t^(p-1) is divided by p: one digit lost
    assert a[P].valuation() == -1
    assert a[P].prec == a[P - 1].prec
    assert a[P].abs_prec == a[P - 1].abs_prec - 1


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=8), st.lists(st.integers(-1000, 1000), min_size=1, max_size=8),
       st.integers(-50, 50))
def test_antiderivative_linear(c1, c2, alpha):
    s1, s2 = PadicSeries(P, c1), PadicSeries(P, c2)
    lhs = antiderivative(s1.scale(alpha) + s2)
    rhs = antiderivative(s1).scale(alpha) + antiderivative(s2)
    for k in range(max(lhs.order, rhs.order)):
        a = lhs[k] if k < lhs.order else 0
        b = rhs[k] if k < rhs.order else 0
        assert a == b


def test_strassmann_examples():
    p = 5
    # read on the unit disk, p + t^2 has its last minimal coefficient at index 2
    assert strassmann_bound(PadicSeries(p, [p, 0, 1]), rescale=False) == 2
    # on the residue disk val(t) >= 1 it has no zeros: p + p^2 t^2 is a unit times p
    assert strassmann_bound(PadicSeries(p, [p, 0, 1])) == 0
    assert strassmann_bound(PadicSeries(p, [0, 1])) == 1
    assert strassmann_bound(PadicSeries(p, [1, p])) == 0
    assert strassmann_bound(PadicSeries(p, [1, p]), rescale=False) == 0


def test_strassmann_uncertified_minimum():
    with pytest.raises(InsufficientPrecision):
        strassmann_bound(PadicSeries(5, [PadicNumber.zero(5, 0), 5]))
    with pytest.raises(InsufficientPrecision):
        strassmann_bound(PadicSeries(5, [25, 25], tail_base=0))


def _poly_series(cs):
    return PadicSeries(5, [padic(c, 5) for c in cs])


@settings(max_examples=300)
@given(st.lists(st.integers(-200, 200), min_size=1, max_size=5).filter(any),
       st.lists(st.integers(-200, 200), min_size=1, max_size=5).filter(any))
def test_strassmann_subadditive(a, b):
    s1, s2 = _poly_series(a), _poly_series(b)
    assert strassmann_bound(s1 * s2) <= strassmann_bound(s1) + strassmann_bound(s2)


def test_evaluate_symmetric_examples():
    p = 5
    c = padic(3 * 25, p)
    t = PadicSeries(p, [0, 1])
    assert evaluate_symmetric(t, [-c, 0, 1]) == 0
    t2 = PadicSeries(p, [0, 0, 1])
    assert evaluate_symmetric(t2, [-c, 0, 1]) == 2 * c
    with pytest.raises(DiskViolation):
        evaluate_symmetric(t, [padic(-2, p), 0, 1])


@settings(max_examples=300)
@given(st.integers(1, 200), st.integers(1, 200), st.lists(st.integers(-99, 99), min_size=1, max_size=6))
def test_evaluate_symmetric_split_matches_direct(ka, kb, cs):
    p = 5
    a, b = padic(5 * ka, p), padic(5 * kb, p)
    s = series_from_poly(cs, p, len(cs))
    u = [a * b, -(a + b), 1]
    assert evaluate_symmetric(s, u) == s.evaluate(a) + s.evaluate(b)
    # k shifts the monomial: sum t^k s(t)
    assert evaluate_symmetric(s, u, k=2) == a * a * s.evaluate(a) + b * b * s.evaluate(b)
