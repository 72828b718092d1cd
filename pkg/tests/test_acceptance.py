"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run directly with ``python tests/test_acceptance.py`` or through pytest; the
lines are repeated in the pytest terminal summary.
"""

import os
import random
import subprocess
import sys
import time
from math import comb

import pytest

from conftest import all_curves, random_curve
from ellmds.catalog import example_289, example_729, example_1024
from ellmds.codes import CodeSpec, generator_matrix, mds_combinatorial, mds_matrix
from ellmds.constructions import audit_code, mec_bound
from ellmds.curves import Curve, count_points, make_curve, random_point
from ellmds.errors import SingularCurve
from ellmds.fields import extend_field, make_field, prime_power
from ellmds.functions import rr_basis
from ellmds.groups import admissible_traces, group_table, index2_subgroups, k_sumset
from ellmds.places import Divisor, make_place

MINOR_BUDGET_S = 300


def _minors_mds(spec):
    M = generator_matrix(spec)
    t = time.perf_counter()
    v = mds_matrix(M, "exhaustive_minors")
    return v, time.perf_counter() - t


def _combinatorial(ex):
    t = time.perf_counter()
    v = mds_combinatorial(ex.spec, ex.group)
    return v, time.perf_counter() - t


def test_criterion_1_example_289(acceptance):
    ex = example_289()
    F, E = ex.field, ex.curve
    facts = {
        "modulus": F.to_json()["modulus"] == [3, 16, 1],
        "curve": E.coeffs == (0, 0, 0, 0, 1),
        "N": ex.group.N == 324,
        "structure": (ex.group.d, ex.group.e) == (18, 18),
        "|D|": ex.spec.n == 162 and ex.H.size == 162,
        "witness": ex.R.witness_b == F.from_coeffs([1, 1]).v,
        "k": ex.spec.k == 4,
    }
    v, tc = _combinatorial(ex)
    vm, tm = _minors_mds(ex.spec)
    ok = (all(facts.values()) and v.mds and tc < 1.0 and vm.mds and tm <= MINOR_BUDGET_S
          and vm.details["minors"] == comb(162, 4))
    bad = [k for k, good in facts.items() if not good]
    acceptance(1, ok, f"[162,4,159] combinatorial {v.label} in {tc:.2f}s; "
                      f"{vm.details['minors']} minors {vm.label} in {tm:.1f}s {bad or ''}")


def test_criterion_2_example_1024(acceptance):
    ex = example_1024()
    F, E = ex.field, ex.curve
    facts = {
        "curve": E.coeffs[:5] == (1, 0, 0, 0, F.from_coeffs([0, 0, 1, 0, 0, 0, 1, 0, 1, 0]).v),
        "N": ex.group.N == 1088,
        "cyclic": ex.group.d == 1,
        "|D|": ex.spec.n == 544 and ex.P0 in ex.spec.D and ex.P0 not in ex.H,
        "G": ex.spec.G == Divisor.infinity(E, 3),
    }
    v, _ = _combinatorial(ex)
    vm, tm = _minors_mds(ex.spec)
    ok = (all(facts.values()) and v.mds and vm.mds and tm <= MINOR_BUDGET_S
          and vm.details["minors"] == comb(544, 3))
    acceptance(2, ok, f"[544,3,542] combinatorial {v.label}; "
                      f"{vm.details['minors']} minors {vm.label} in {tm:.1f}s")


def test_criterion_3_example_729(acceptance):
    ex = example_729()
    F = ex.field
    facts = {
        "N": ex.group.N == 784,
        "structure": (ex.group.d, ex.group.e) == (28, 28),
        "|D|": ex.spec.n == 392,
        "witness": ex.R.witness_b == F.gen.v,
    }
    v, _ = _combinatorial(ex)
    M = generator_matrix(ex.spec)
    t = time.perf_counter()
    vs = mds_matrix(M, "sampled_minors", count=10 ** 6, seed=729)
    ts = time.perf_counter() - t
    ok = all(facts.values()) and v.mds and vs.mds and vs.details["minors"] == 10 ** 6 and ts <= 120
    acceptance(3, ok, f"[392,4,389] combinatorial {v.label}; 10^6 sampled minors "
                      f"{vs.label} in {ts:.1f}s")


# (q, k, restricted) -> maximal length, from the bound table
BOUND_TABLE = {
    (289, 3, False): 162, (289, 3, True): 162, (289, 4, False): 162, (289, 4, True): 161,
    (361, 3, False): 200, (361, 3, True): 200, (361, 4, False): 200, (361, 4, True): 199,
    (529, 3, False): 288, (529, 3, True): 288, (529, 4, False): 288, (529, 4, True): 287,
    (1024, 3, False): 544, (1024, 3, True): 544, (1024, 4, False): 544, (1024, 4, True): 543,
}


def test_criterion_4_bound_table(acceptance):
    got = {key: mec_bound(*key).value for key in BOUND_TABLE}
    wrong = {key: v for key, v in got.items() if v != BOUND_TABLE[key]}
    acceptance(4, not wrong and len(got) == 16, f"{16 - len(wrong)}/16 bound values exact {wrong or ''}")


# -- oracle equivalence ------------------------------------------------------------------


def random_divisor(E: Curve, k: int, rng: random.Random, avoid=(), deg3: bool = False,
                   negative: bool = True) -> Divisor:
    """Degree-k divisor on rational points outside ``avoid``, optionally with a degree-3 place."""
    pool = [P for P in E.points() if P not in set(avoid)]
    terms = []
    rest = k
    if deg3:
        K = extend_field(E.field, 3)
        while True:
            R = random_point(E, K, rng)
            if not R.is_rational_over(E.field):
                break
        terms.append((make_place(E, R), 1))
        rest -= 3
    m = rng.randint(1, min(3, len(pool)))
    supp = rng.sample(pool, m)
    for P in supp[:-1]:
        c = rng.randint(-1 if negative else 0, 2)
        terms.append((P, c))
        rest -= c
    terms.append((supp[-1], rest))
    D = Divisor(E, terms)
    assert D.degree == k
    return D


def random_small_code(rng: random.Random):
    while True:
        q = rng.choice([5, 7, 9, 11, 13])
        F = make_field(*prime_power(q))
        E = random_curve(F, rng)
        k = rng.randint(1, 5)
        deg3 = k >= 2 and rng.random() < 0.3
        G = random_divisor(E, k, rng, deg3=deg3)
        supp = set(G.geometric())
        free = [P for P in E.points() if P not in supp]
        if len(free) < k + 1:
            continue
        n = rng.randint(k + 1, min(12, len(free)))
        D = rng.sample(free, n)
        spec = CodeSpec(E, D, G, {"construction": "random"})
        spec.validate()
        return spec


def test_criterion_5_oracle_equivalence(acceptance):
    rng = random.Random(5)
    agree, total, labels = 0, 0, []
    for _ in range(220):
        spec = random_small_code(rng)
        M = generator_matrix(spec)
        verdicts = [mds_combinatorial(spec, group_table(spec.curve)).mds,
                    mds_matrix(M, "exhaustive_distance").mds,
                    mds_matrix(M, "exhaustive_minors").mds]
        total += 1
        agree += len(set(verdicts)) == 1
        labels.append(verdicts[0])
    both = 0 < sum(labels) < len(labels)
    acceptance(5, agree == total and total >= 200 and both,
               f"{agree}/{total} codes with three agreeing verdicts "
               f"({sum(labels)} MDS, {total - sum(labels)} NotMDS)")


# -- Riemann-Roch ------------------------------------------------------------------------


def _points_over(E: Curve, K):
    pts = [E.O.over(K)]
    for x in range(K.q):
        pts.extend(E.point(x, y, K) for y in E.y_roots(K, x))
    return pts


def _in_space_everywhere(f, G: Divisor, pts) -> bool:
    """div(f) + G >= 0 checked at every point of E over the divisor's field."""
    geo = G.geometric(pts[0].field)
    for P in pts:
        g = geo.get(P, 0)
        if g >= 0 and P.x is not None:
            vals = [fac.value(pts[0].field, P.x, P.y) for fac, _ in f.factors]
            if all(vals):
                continue
        if f.valuation(P) + g < 0:
            return False
    return True


def test_criterion_6_riemann_roch(acceptance):
    rng = random.Random(6)
    curves = [make_curve(make_field(5), 0, 0, 0, 1, 1), make_curve(make_field(7), 0, 0, 0, 3, 1),
              make_curve(make_field(2, 3), 1, 0, 0, 0, 1), make_curve(make_field(3, 2), 0, 1, 0, 0, 1),
              make_curve(make_field(11), 1, 2, 3, 4, 7)]
    point_sets = {}
    total = good = with_deg3 = with_neg = 0
    for i in range(110):
        E = curves[i % 5]
        k = rng.randint(1, 6)
        deg3 = k >= 2 and rng.random() < 0.4
        G = random_divisor(E, k, rng, deg3=deg3)
        K = G.common_field()
        if (E, K) not in point_sets:
            point_sets[(E, K)] = _points_over(E, K)
        pts = point_sets[(E, K)]
        basis = rr_basis(E, G)
        O = E.O.over(K)
        poles = {f.valuation(O) for f in basis}
        ok = (len(basis) == k and len(poles) == k
              and all(_in_space_everywhere(f, G, pts) for f in basis))
        total += 1
        good += ok
        with_deg3 += G.has_nonrational_support()
        with_neg += any(c < 0 for c in G.terms.values())
    acceptance(6, good == total and total >= 100 and with_deg3 and with_neg,
               f"{good}/{total} divisors with deg G independent functions in L(G) "
               f"({with_deg3} with a degree-3 place, {with_neg} with negative coefficients)")


# -- Hasse and Waterhouse ----------------------------------------------------------------


def _brute_count(E: Curve) -> int:
    F = E.field
    n = 1
    for x in range(F.q):
        for y in range(F.q):
            lhs, rhs = E.lhs_rhs(F, x, y)
            n += lhs == rhs
    return n


def test_criterion_7_hasse_waterhouse(acceptance):
    failures = []
    summary = []
    for q in (5, 7, 8, 9):
        p, a = prime_power(q)
        F = make_field(p, a)
        counts = set()
        for E in all_curves(F):
            N = count_points(E)
            if (N - q - 1) ** 2 > 4 * q:
                failures.append((q, E.coeffs, "hasse"))
            counts.add(N)
        expected = {q + 1 - t for t in admissible_traces(p, a)}
        if counts != expected:
            failures.append((q, sorted(counts ^ expected), "closure"))
        summary.append(f"q={q}: {len(counts)} orders")
    # full long-Weierstrass sweep over GF(5) against a brute-force count
    F5 = make_field(5)
    long_counts = set()
    for coeffs in ((a1, a2, a3, a4, a6) for a1 in range(5) for a2 in range(5) for a3 in range(5)
                   for a4 in range(5) for a6 in range(5)):
        try:
            E = Curve(F5, *coeffs)
        except SingularCurve:
            continue
        N = count_points(E)
        if N != _brute_count(E):
            failures.append((5, coeffs, "count"))
        long_counts.add(N)
    if long_counts != {6 - t for t in admissible_traces(5, 1)}:
        failures.append((5, "long form", "closure"))
    acceptance(7, not failures, f"{'; '.join(summary)}; long form over GF(5) closed {failures or ''}")


# -- structural property suites ----------------------------------------------------------


def _gf197_groups():
    F = make_field(197)
    out = {}
    for a4 in range(1, 40):
        E = make_curve(F, 0, 0, 0, a4, 1)
        out[a4] = group_table(E)
    return out


@pytest.fixture(scope="module")
def gf197():
    return _gf197_groups()


def _coset_index2(G, rng):
    H = rng.choice(index2_subgroups(G))
    u = next(x for x in G.order if x not in H)
    return H, u


def _sigma3_trials(G, rng, trials):
    """Random S above the size threshold: either Sigma_3(S) = G or S sits in an index-2 coset."""
    N, two = G.N, len(G.two_torsion)
    lo = max(2 * N // 5, 12 * two + 54) + 1
    subs = index2_subgroups(G)
    bad = 0
    for t in range(trials):
        mode = t % 3
        if mode == 0 or not subs:
            S = rng.sample(G.order, rng.randint(lo, N))
        else:
            H, u = _coset_index2(G, rng)
            cos = H.coset(u)
            if len(cos) < lo:
                S = rng.sample(G.order, rng.randint(lo, N))
            else:
                S = rng.sample(cos, rng.randint(lo, len(cos)))
                if mode == 2:
                    S.append(rng.choice(H.elements))
        full = len(k_sumset(S, 3, G, keep_history=False).elements()) == N
        in_coset = any(all(x not in H for x in S) for H in subs)
        bad += not (full or in_coset)
    return bad


def _sigmak_trials(G, rng, trials):
    N = G.N
    bad = 0
    for _ in range(trials):
        S = rng.sample(G.order, rng.randint(N // 2 + 1, N))
        k = rng.randint(3, N // 10)
        bad += len(k_sumset(S, k, G, keep_history=False).elements()) != N
    return bad


def test_criterion_8_structural_sweeps(acceptance, gf197):
    rng = random.Random(8)
    ex289 = example_289()
    groups = list(gf197.values()) + [ex289.group, example_729().group, example_1024().group]
    for q in (5, 7, 8, 9, 11, 13):
        F = make_field(*prime_power(q))
        groups += [group_table(E) for E in all_curves(F)[:200]]
    index2_bad = sum(len(index2_subgroups(G)) != len(G.two_torsion) - 1 for G in groups)

    big = [G for G in gf197.values() if G.N >= 165] + [ex289.group]
    s3_bad = sum(_sigma3_trials(G, rng, 6) for G in big)
    s3_trials = 6 * len(big)
    sk_groups = [G for G in big if G.N >= 30 * len(G.two_torsion) + 135]
    sk_bad = sum(_sigmak_trials(G, rng, 4) for G in sk_groups)
    sk_trials = 4 * len(sk_groups)

    # necessity: even N, n = N/2, rational-only G of even degree
    nec_curves = [G for G in sk_groups if G.N % 2 == 0]
    nec_bad = nec_total = 0
    for i in range(100):
        G = nec_curves[i % len(nec_curves)]
        E = G.curve
        N = G.N
        k = 2 * rng.randint(2, N // 20)
        if i % 2 == 0:
            H, u = _coset_index2(G, rng)
            D = H.coset(u)
        else:
            while True:
                D = rng.sample(G.order, N // 2)
                if audit_code(CodeSpec(E, D, Divisor.infinity(E, k)), G).d_is_coset is False:
                    break
        Gdiv = random_divisor(E, k, rng, avoid=D)
        spec = CodeSpec(E, D, Gdiv)
        spec.validate()
        rep = audit_code(spec, G)
        nec_total += 1
        nec_bad += mds_combinatorial(spec, G).mds or rep.prediction != "NotMDS"

    # odd N regime
    odd = next(G for G in gf197.values() if G.N % 2 == 1 and G.N >= 165)
    E, N = odd.curve, odd.N
    R = make_place(E, random_point(E, extend_field(E.field, 3), rng))
    odd_bad = odd_total = 0
    for i in range(50):
        n = rng.randint(-(-(2 * N + 5) // 5), N - 6)
        kmax = (5 * n - 2 * N + 10) // 5
        k = rng.randint(3, max(3, kmax))
        D = rng.sample(E.points(), n)
        if i % 3 == 0:
            Gdiv = Divisor(E, [(R, 1)]) + random_divisor(E, k - 3, rng, avoid=D) if k > 3 \
                else Divisor(E, [(R, 1)])
        else:
            Gdiv = random_divisor(E, k, rng, avoid=D)
        spec = CodeSpec(E, D, Gdiv)
        spec.validate()
        rep = audit_code(spec, odd)
        odd_total += 1
        odd_bad += (not rep.odd_regime) or mds_combinatorial(spec, odd).mds

    ok = (index2_bad == 0 and s3_bad == 0 and s3_trials >= 50 and sk_bad == 0 and sk_trials >= 50
          and nec_bad == 0 and nec_total == 100 and odd_bad == 0 and odd_total == 50)
    acceptance(8, ok, f"index-2 count {len(groups) - index2_bad}/{len(groups)}; "
                      f"Sigma_3 {s3_trials - s3_bad}/{s3_trials}; Sigma_k {sk_trials - sk_bad}/{sk_trials}; "
                      f"necessity {nec_total - nec_bad}/{nec_total} NotMDS; "
                      f"odd N {odd_total - odd_bad}/{odd_total} NotMDS")


# -- determinism -------------------------------------------------------------------------


def _construct(tmp, flags, hashseed):
    out = tmp / "code.json"
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    subprocess.run([sys.executable, "-m", "ellmds", "code", "construct", *flags, "-o", str(out)],
                   check=True, env=env, capture_output=True)
    return out.read_bytes(), out.with_suffix(".csv").read_bytes()


def test_criterion_9_determinism(acceptance, tmp_path):
    runs = [["--p", "17", "--a", "2", "--k", "4", "--seed", "11"],
            ["--p", "2", "--a", "10", "--k", "3", "--seed", "7"],
            ["--p", "17", "--a", "2", "--k", "4", "--restricted", "--seed", "11"]]
    same = 0
    for i, flags in enumerate(runs):
        a, b = tmp_path / f"a{i}", tmp_path / f"b{i}"
        a.mkdir()
        b.mkdir()
        same += _construct(a, flags, 1) == _construct(b, flags, 2)
    acceptance(9, same == len(runs), f"{same}/{len(runs)} flag sets give byte-identical JSON and CSV")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
