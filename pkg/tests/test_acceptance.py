"""Acceptance criteria 1-10; each test records one line for the terminal summary."""

import time
from fractions import Fraction

import pytest

from nicecurves import campaigns
from nicecurves.elliptic import j_invariant
from nicecurves.hyper import curve_H, curve_Hq, known_points_H, known_points_Hq, pullback_points, search_points

RESULTS: list[str] = []


def record(criterion: str, ok, detail: str) -> None:
    status = ok if isinstance(ok, str) else ("PASS" if ok else "FAIL")
    line = f"criterion {criterion:<6} {status:<8} {detail}"
    RESULTS.append(line)
    print(line)


def _first_failure(rep):
    return rep.witnesses.get("first_failure")


def test_criterion_1_search_Hq():
    t0 = time.perf_counter()
    pts = search_points(curve_Hq(), 1000)
    dt = time.perf_counter() - t0
    ok = set(pts) == set(known_points_Hq()) and len(pts) == 7 and dt < 30
    record("1", ok, f"|H_q(Q)| search at bound 1000 = {len(pts)} in {dt:.1f}s")
    assert ok


def test_criterion_2_search_H_and_pullback():
    t0 = time.perf_counter()
    pts = search_points(curve_H(), 1000)
    dt = time.perf_counter() - t0
    pulled = {P for Qp in known_points_Hq() for P in pullback_points(Qp)}
    ok = set(pts) == set(known_points_H()) == pulled and len(pts) == 12 and dt < 60
    record("2", ok, f"|H(Q)| search at bound 1000 = {len(pts)}, pullback = {len(pulled)}, {dt:.1f}s")
    assert ok


def test_criterion_3_torsion_classification():
    rep = campaigns.thm1_ii(200, 20, height=50, d_bound=50)
    n = rep.witnesses["classification_cases"]
    record("3", rep.passed, f"{n} (L, d) pairs, {rep.witnesses['classification_failures']} disagreements")
    assert rep.passed, _first_failure(rep)
    assert n == 200 * 21


def test_criterion_4_psi3_no_rational_roots():
    rep = campaigns.psi3_roots(500)
    n = rep.witnesses["no_rational_root_cases"]
    record("4", rep.passed, f"{n} nice L, psi_3 rational roots found in {rep.witnesses['no_rational_root_failures']}")
    assert rep.passed and n == 500, _first_failure(rep)


def test_criterion_5_rank_two_witnesses():
    rep = campaigns.thm1_iii_iv(100, height=100)
    n = rep.witnesses["witness_cases"]
    record("5", rep.passed, f"{n} sampled u plus spot checks u = 2, 3")
    assert rep.passed and n == 100, _first_failure(rep)


def test_criterion_6_j_square():
    rep = campaigns.sec6_j(500)
    ok = rep.passed and j_invariant(Fraction(8, 5)) == Fraction(686, 15) ** 2
    record("6", ok, f"{rep.witnesses['j_square_cases']} nice L with j a nonzero square; j(8/5) = (686/15)^2")
    assert ok, _first_failure(rep)


def test_criterion_7_jacobian_oracle():
    rep = campaigns.jacobian_oracle(2, 11)
    primes = rep.parameters["primes"]
    record("7", rep.passed and len(primes) == 2, f"enumeration = zeta order at p in {primes}")
    assert rep.passed and len(primes) == 2, _first_failure(rep)


@pytest.fixture(scope="module")
def chabauty():
    return {r.claim: r for r in campaigns.chabauty_reports(None)}


def test_criterion_8a_generator_non_torsion(chabauty):
    rep = chabauty["chabauty.non-torsion"]
    record("8(a)", rep.passed, f"reduction orders {rep.witnesses['orders']}")
    assert rep.passed


def _annihilation(chabauty, prefix):
    rep = chabauty["chabauty.annihilation"]
    return rep, [c for c in rep.checks if c.name.startswith(prefix)]


def test_criterion_8b_torsion_integrals_vanish(chabauty):
    rep, checks = _annihilation(chabauty, ("torsion", "generator + torsion"))
    ok = bool(checks) and all(c.ok for c in checks)
    digits = min(min(c.operands) for c in checks)
    record("8(b)", ok, f"{len(checks)} torsion checks at p = {rep.parameters['p']}, >= {digits} digits")
    assert ok


def test_criterion_8c_pairwise_differences_vanish(chabauty):
    rep, checks = _annihilation(chabauty, "[")
    ok = len(checks) == 21 and all(c.ok for c in checks)
    record("8(c)", ok, f"{len(checks)} difference classes, >= {min(c.operands for c in checks)} digits")
    assert ok


def test_criterion_8_negative_control(chabauty):
    rep = chabauty["chabauty.negative-control"]
    record("8(ctl)", rep.passed, "torsion posing as generator is refused")
    assert rep.passed


def test_criterion_8_degraded_clause(chabauty):
    rep = chabauty["lemma-quotient"]
    verdict = rep.witnesses["verdict"]
    if verdict == "COMPLETE":
        record("8(deg)", True, "not needed: verdict COMPLETE")
        return
    clause = rep.witnesses["degraded_clause"]
    ok = verdict == "PARTIAL" and rep.status == "PARTIAL" and clause["holds"] and rep.witnesses["bounds"]["disks"]
    record("8(deg)", "PARTIAL" if ok else "FAIL",
           f"bound {clause['bound']} <= |C(F_p)| + 2 = {clause['num_points_Fp_plus_2']} at p = {rep.witnesses['prime']}, "
           f"unresolved disks {rep.witnesses['unresolved_disks']}")
    assert ok


@pytest.mark.xfail(strict=True, reason="omega_A is (1 + x) dx/2y to working precision; its double zero at (-1, 0) "
                                       "leaves that disk at Strassmann bound 3 for every p <= 50")
def test_criterion_8d_complete(chabauty):
    rep = chabauty["lemma-quotient"]
    bound = rep.witnesses["bounds"]["certified_bound"]
    ok = rep.witnesses["verdict"] == "COMPLETE" and bound == 7
    record("8(d)", ok or "PARTIAL", f"best certified bound {bound} at p = {rep.witnesses['prime']} (target 7)")
    assert ok


def test_criterion_9_descent_chain():
    rep = campaigns.prop3T(50)
    ok = rep.passed and rep.witnesses["identities_cases"] == 50 and rep.witnesses["cusp"] == [(3, 9)]
    (A, B), = rep.witnesses["cusp"]
    record("9", ok, f"50 specializations; cusp ({A}, {B}); {rep.witnesses['verdict']}")
    assert ok, _first_failure(rep)


def test_criterion_10_auxiliary_curves():
    reps = {r.claim: r for r in campaigns.lemma4t()}
    proved = [reps[k] for k in ("lemma4t1.E1", "lemma4t1.E2", "lemma4t2.C")]
    trusted = [reps[k] for k in ("lemma4t1.rank0", "lemma4t2.rank0")]
    order4 = any(c.name == "(1,1) has order 4" and c.ok for c in reps["lemma4t1.E1"].checks)
    ok = all(r.status == "PASS" for r in proved) and all(r.status == "TRUSTED-INPUT" and r.source for r in trusted)
    record("10", ok and order4, "E1, E2, C, J checked; rank 0 logged TRUSTED-INPUT")
    assert ok and order4
