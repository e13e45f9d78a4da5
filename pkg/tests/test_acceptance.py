"""Acceptance criteria 1-7, each with its stated tolerance and time budget.

Every test records one PASS/FAIL line; ``conftest.py`` prints them at the end of
the run. ``python tests/test_acceptance.py`` runs the same checks standalone.
"""
import cmath
import itertools
import random
import sys
import time

import pytest

from fermat_mirror import quiver as quiver_mod
from fermat_mirror.cli import main as cli_main
from fermat_mirror.errors import SearchExhausted
from fermat_mirror.fields import C64, Q, QI, cross
from fermat_mirror.framed import check_framed, functor_F, functor_G, lemma_identities, \
    random_framed_rep, trivialize
from fermat_mirror.moduli import DEFAULT_HEIGHT, mirror_report, sample_control_points, \
    sample_fermat_points, syz_pipeline
from fermat_mirror.quiver import build_beilinson
from fermat_mirror.rep import random_beilinson_rep, thin_rep_from_levels, thin_rep_from_point, validate
from fermat_mirror.sdr import build_sdr, check_complex, extract_point, random_mutant
from fermat_mirror.stability import interpolate, is_stable, make_Zn, mirror, walls_on_segment

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[n])


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# independent oracles ---------------------------------------------------------

def square_scan(q) -> int:
    """Commuting squares found by pairing length-2 paths with equal endpoints."""
    succ: dict = {}
    for a in q.arrows:
        succ.setdefault(a.source, set()).add(a.target)
    count = 0
    for v in q.vertices:
        for m1, m2 in itertools.combinations(sorted(succ.get(v, ())), 2):
            count += len(succ.get(m1, set()) & succ.get(m2, set()))
    return count


def closed_subsets(rep):
    sup = rep.support
    arrows = [(a.source, a.target) for a in rep.nonzero_arrows()]
    for r in range(1, len(sup)):
        for s in itertools.combinations(sup, r):
            s = set(s)
            if all(t in s for a, t in arrows if a in s):
                yield s


def brute_stable(rep, Z) -> bool:
    q = rep.quiver
    charge = lambda s: sum(complex(Z.charge(q.index(v))) for v in s)
    total = cmath.phase(charge(rep.support))
    return all(cmath.phase(charge(s)) < total - 1e-12 for s in closed_subsets(rep))


def brute_phase_exceeds(rep, Z, witness) -> bool:
    q = rep.quiver
    charge = lambda s: sum(complex(Z.charge(q.index(v))) for v in s)
    return cmath.phase(charge(witness)) > cmath.phase(charge(rep.support)) + 1e-12


# 1 ----------------------------------------------------------------------------

def test_criterion_1_quiver_counts():
    ok, notes = True, []
    with Timer() as t5:
        q5 = quiver_mod._tensor_power.__wrapped__(5)  # bypass the cache so the build is timed
        scan5 = square_scan(q5)
    for n in range(2, 6):
        q = q5 if n == 5 else quiver_mod._tensor_power.__wrapped__(n)
        scan = scan5 if n == 5 else square_scan(q)
        good = (len(q.vertices) == n ** n and len(q.arrows) == n * (n - 1) * n ** (n - 1)
                and len(q.relations) == scan)
        ok &= good
        notes.append(f"n={n}:{len(q.vertices)}v/{len(q.arrows)}a/{len(q.relations)}r")
    ok &= t5.elapsed < 5
    record(1, ok, f"{' '.join(notes)}; n=5 build+scan {t5.elapsed:.2f}s (<5s)")
    assert ok


# 2 ----------------------------------------------------------------------------

def test_criterion_2_equivalence():
    rng = random.Random(2)
    gf = fg = lem = 0
    with Timer() as t:
        for k in range(100):
            n = 3 if k % 2 == 0 else 4
            E = random_beilinson_rep(n, [rng.randint(0, 2) for _ in range(n)], QI, rng)
            gf += functor_G(functor_F(E)) == E
        for k in range(100):
            n = 3 if k % 2 == 0 else 4
            fr = random_framed_rep(n, [rng.randint(0, 2) for _ in range(n)], QI, rng)
            triv, iso = trivialize(fr)
            fg += bool(check_framed(fr)) and iso.is_isomorphism() \
                and triv.rep == functor_F(functor_G(fr)).rep
            lem += all(lemma_identities(fr).values())
    ok = gf == 100 and fg == 100 and lem == 100 and t.elapsed < 30
    record(2, ok, f"G(F(E))=E {gf}/100, F(G(fr))~fr {fg}/100, lemma {lem}/100; {t.elapsed:.1f}s (<30s)")
    assert ok


# 3 ----------------------------------------------------------------------------

def test_criterion_3_complex():
    rng = random.Random(3)
    good = caught = 0
    with Timer() as t:
        for k in range(102):
            n = (3, 4, 5)[k % 3]
            E = random_beilinson_rep(n, [rng.randint(0, 2) for _ in range(n)], QI, rng)
            good += check_complex(build_sdr(E)).ok
        for k in range(50):
            M = random_mutant((3, 4, 5)[k % 3], QI, rng)
            assert len(validate(M).violations) == 1
            caught += not check_complex(build_sdr(M, strict=False)).ok
    ok = good == 102 and caught == 50 and t.elapsed < 30
    record(3, ok, f"valid reps ok {good}/102, mutants caught {caught}/50; {t.elapsed:.1f}s (<30s)")
    assert ok


# 4 ----------------------------------------------------------------------------

def _fermat_truth(p, n):
    v = sum(x ** n for x in p.coords)
    if p.field.exact:
        return v == 0
    return abs(v) <= 1e-9 * sum(abs(x) ** n for x in p.coords)


def test_criterion_4_moduli_side():
    configs = [(3, Q), (3, QI), (4, QI), (3, C64), (4, C64)]
    fallback = ""
    ok, notes = True, []
    with Timer() as t:
        for n, f in configs:
            try:
                sampled = sample_fermat_points(n, f, 38, seed=40 + n)
            except SearchExhausted:
                # no small Gaussian points on the quartic: exact run is controls only,
                # on-locus n=4 points come from the floating run
                sampled = []
                fallback = f"; n=4/Qi search exhausted at height {DEFAULT_HEIGHT} (controls only)"
            Z = make_Zn(n, exact=f.exact)
            off = sample_control_points(n, f, max(12, 50 - len(sampled)), seed=40 + n)
            chart = syz_pipeline(n, Z, sampled + off)
            entries = chart.entries
            controls = [e for e in entries if any(e.point == c for c in off)]
            agree = all(is_stable(e.rep, Z).stable and brute_stable(e.rep, Z) for e in entries)
            roundtrip = all(extract_point(e.rep, Z) == e.point for e in entries)
            fp = sum(e.verdict == "on-fermat" and not _fermat_truth(e.point, n) for e in entries)
            fn = sum(e.verdict == "zero-object" and _fermat_truth(e.point, n) for e in entries)
            # the chart's on-fermat subset is exactly the sampled Fermat points
            exact_subset = len(chart.on_fermat_points()) == len(sampled) and \
                all(e.verdict == "zero-object" for e in controls)
            good = (len(entries) >= 50 and len(controls) >= 12 and agree and roundtrip
                    and fp == fn == 0 and exact_subset)
            ok &= good
            notes.append(f"n={n}/{f.tag}: {len(entries)} pts, {len(controls)} controls, fp={fp} fn={fn}")
    ok &= t.elapsed < 60
    record(4, ok, "; ".join(notes) + f"{fallback}; {t.elapsed:.1f}s (<60s)")
    assert ok


# 5 ----------------------------------------------------------------------------

def _brute_family_size_n3() -> int:
    alphabet = [0, 1, -1, 2, -2, 1j, -1j]
    vecs = [v for v in itertools.product(alphabet, repeat=3) if any(v)]
    count = 0
    for a in vecs:
        for b in vecs:
            # the commuting identity a_s b_t = a_t b_s for every label pair
            if all(a[s] * b[t] == a[t] * b[s] for s, t in itertools.combinations(range(3), 2)):
                count += 1
    return count


def test_criterion_5_mirror_side():
    ok, notes = True, []
    with Timer() as t:
        for n in (3, 4):
            Z = make_Zn(n)
            M = mirror(Z)
            r = mirror_report(n, Z, seed=5)
            simples = [e for e in r.entries if e["object"].startswith("S_")]
            thin = [e for e in r.entries if e["object"] == "thin"]
            good = len(simples) == n and all(e["mirror"]["status"] == "stable" for e in simples)
            good &= all(e["mirror"]["status"] == "unstable" and e["mirror"]["witness"] for e in thin)
            # re-verify recorded witnesses by direct phase comparison
            B = build_beilinson(n)
            rng = random.Random(n)
            for e in rng.sample(thin, min(200, len(thin))):
                levels = [[QI.from_json(c) for c in lv] for lv in e["levels"]]
                E = thin_rep_from_levels(B, levels, QI)
                w = {int(k) for k in e["mirror"]["witness"]}
                good &= w in [set(s) for s in closed_subsets(E)] and brute_phase_exceeds(E, M, w)
            mode_ok = r.exhaustive == (r.family_size <= 10**4)
            if n == 3:
                mode_ok &= r.family_size == _brute_family_size_n3() == len(thin)
            good &= mode_ok
            ok &= good
            mode = "exhaustive" if r.exhaustive else f"sampled {len(thin)} of {r.family_size}"
            notes.append(f"n={n}: {len(simples)} simples stable, {len(thin)} thin unstable ({mode})")
    ok &= t.elapsed < 60
    record(5, ok, "; ".join(notes) + f"; {t.elapsed:.1f}s (<60s)")
    assert ok


# 6 ----------------------------------------------------------------------------

def _bisect(f, lo, hi):
    flo = f(lo)
    while hi - lo > 1e-14:
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def test_criterion_6_walls():
    with Timer() as t:
        Z0 = make_Zn(3)
        Z1 = mirror(Z0)
        E = thin_rep_from_point(build_beilinson(3), [1, -1, 0])
        walls = walls_on_segment(Z0, Z1, E)
        q = E.quiver
        worst = 0.0
        for w in walls:
            def gap(s, sup=w.witness.support):
                Zt = interpolate(Z0, Z1, s)
                A = sum(complex(Zt.charge(q.index(v))) for v in sup)
                R = sum(complex(Zt.charge(q.index(v))) for v in E.support)
                return cross(R, A)
            # bracket by scanning, then bisect
            grid = [k / 200 for k in range(201)]
            lo = max(g for g in grid if g < w.t)
            hi = min(g for g in grid if g > w.t)
            worst = max(worst, abs(_bisect(gap, lo, hi) - w.t))
    ok = len(walls) >= 1 and worst <= 1e-9 and t.elapsed < 5
    ts = ", ".join(f"t={w.exact_t or w.t} witness {w.witness}" for w in walls)
    record(6, ok, f"{len(walls)} walls ({ts}); max |exact - bisection| = {worst:.1e}; {t.elapsed:.2f}s (<5s)")
    assert ok


# 7 ----------------------------------------------------------------------------

def test_criterion_7_determinism(tmp_path):
    ok = True
    notes = []
    for n, field in [(3, "Qi"), (4, "C64")]:
        outs = []
        for run in range(2):
            path = tmp_path / f"chart_{n}_{run}.jsonl"
            code = cli_main(["moduli", "pipeline", "--n", str(n), "--field", field,
                             "--count", "50", "--seed", "7", "--out", str(path)])
            ok &= code == 0
            outs.append(path.read_bytes())
        same = outs[0] == outs[1]
        ok &= same
        notes.append(f"n={n}/{field}: {len(outs[0])} bytes, identical={same}")
    record(7, ok, "; ".join(notes))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
