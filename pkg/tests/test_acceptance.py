"""Acceptance checks, one per criterion.

Each check prints a single ``criterion N: PASS|FAIL  detail`` line; the lines
are repeated in the pytest terminal summary.  Run directly with
``python3 -m tests.test_acceptance`` for the lines alone.
"""

from __future__ import annotations

import sys
import time

import pytest

from normtrace import autgroup as grp
from normtrace import codes as cod
from normtrace import places as plc
from normtrace import semigroup as sgp
from normtrace import subtower as sub
from normtrace.gf import make_field

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> bool:
    RESULTS[n] = (ok, detail)
    print(line(n))
    return ok


def line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"


def _timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


# -- 1: place counts ---------------------------------------------------------------------


def check_places() -> bool:
    pairs = [(q, m) for q in (2, 3, 4, 5, 7) for m in (1, 2, 3, 4) if q ** (m + 1) * (q - 1) <= 30000]
    bad, slowest = [], 0.0
    for q, m in pairs:
        ps, dt = _timed(plc.enumerate_places, q, m)
        slowest = max(slowest, dt)
        if ps.total != plc.n1_formula(q, m) or dt >= 10:
            bad.append((q, m, ps.total, round(dt, 2)))
    spot = {k: plc.enumerate_places(*k).total for k in [(3, 2), (4, 2), (2, 1)]}
    ok = not bad and spot == {(3, 2): 60, (4, 2): 212, (2, 1): 8}
    return record(1, ok, f"{len(pairs)} pairs exact, slowest {slowest:.2f}s, spot {spot}, bad {bad}")


# -- 2: genus and gaps ----------------------------------------------------------------------


def check_genus() -> bool:
    bad = []
    grid = [(q, m) for q in (2, 3, 4, 5, 7, 8, 9) for m in range(1, 7)]
    for q, m in grid:
        for kind in "TZ":
            sg = sgp.SemigroupSpec(kind, q, m)
            if len(sgp.gaps(sg)) != sg.genus:
                bad.append((kind, q, m))
        if not sgp.hurwitz_identity_holds(q, m):
            bad.append(("hurwitz", q, m))
    spot = (sgp.genus("T", 3, 2), sgp.genus("Z", 3, 2))
    ok = not bad and spot == (16, 8)
    return record(2, ok, f"{len(grid)} pairs x (T, Z) gaps = genus, Hurwitz identity exact, (T,3,2),(Z,3,2) = {spot}, bad {bad}")


# -- 3: group orders --------------------------------------------------------------------------

GROUP_ORDERS = {(3, 1): 36, (4, 1): 96, (5, 1): 200, (5, 2): 200, (4, 2): 960, (4, 3): 1536, (4, 4): 1536}


def check_groups() -> bool:
    rows, ok = [], True
    for (q, m), order in GROUP_ORDERS.items():
        rep, dt = _timed(grp.automorphism_group, q, m)
        stab_ok = rep.stabilizer_order == q ** grp.epsilon(q, m) * (q - 1)
        orbit_ok = len(rep.orbit) == grp.expected_orbit_size(q, m) == rep.non_split_count
        good = rep.order == order and stab_ok and orbit_ok and all(rep.checks.values()) and dt < 300
        ok &= good
        rows.append(f"({q},{m})={rep.order}/stab {rep.stabilizer_order}/orbit {len(rep.orbit)}/{dt:.1f}s" + ("" if good else "!"))
    return record(3, ok, "; ".join(rows))


# -- 4: exceptional cases -----------------------------------------------------------------


def check_exceptional() -> bool:
    reps = {k: grp.automorphism_group(*k) for k in [(2, 2), (2, 3), (3, 2)]}
    o22, o23, o32 = (reps[k].order for k in [(2, 2), (2, 3), (3, 2)])
    flag = reps[(3, 2)].hurwitz.exceptional
    ok = o22 <= 168 and o23 <= 96 and o32 == 36 and flag
    return record(4, ok, f"(2,2) closure {o22} <= 168; (2,3) closure {o23} <= 96; (3,2) closure {o32}, exception flag {flag}")


# -- 5: symbolic verification ------------------------------------------------------------------


def check_symbolic() -> bool:
    n_maps, bad = 0, []
    for q in (2, 3, 4, 5):
        for m in (1, 2, 3, 4):
            decomp = grp.decomposition_generators(q, m)
            movers, rejected = grp.conjugator_candidates(q, m)
            n_maps += len(decomp) + len(movers)
            if rejected:
                bad.append(("relation", q, m, len(rejected)))
            if m <= 3 and not sub.kummer_identities(q, m):
                bad.append(("kummer", q, m))
            ff = sub.fixed_field_check(q, m)
            if not ff.ok:
                bad.append(("fixed_field", q, m))
    return record(5, not bad, f"{n_maps} maps pass the relation check; Kummer identities hold; fixed field cut is tight; bad {bad}")


# -- 6: the decomposition tower -------------------------------------------------------------------


def check_subtower() -> bool:
    bad = []
    for q in (2, 3, 4, 5):
        for m in (1, 2, 3, 4):
            if len(sub.enumerate_z_places(q, m)) != plc.n1_formula(q, m, "Z"):
                bad.append(("z_places", q, m))
            T, Z = sgp.SemigroupSpec("T", q, m), sgp.SemigroupSpec("Z", q, m)
            if any((n in Z) != (n * (q - 1) in T) for n in range(2 * T.conductor + 1)):
                bad.append(("scaling", q, m))
            if m <= 3:
                for r in sub.divisors_of(q - 1):
                    if not sub.intermediate_enumerate(q, m, r).k_in_bounds:
                        bad.append(("k_bounds", q, m, r))
    spot = len(sub.enumerate_z_places(3, 2))
    ok = not bad and spot == 35
    return record(6, ok, f"Z counts exact (3,2) -> {spot}; scaling n <= 2c_m; k-bounds for every r | q-1; bad {bad}")


# -- 7: codes ---------------------------------------------------------------------------------------


def check_codes() -> bool:
    bad, brute = [], 0
    for q in (2, 3, 4):
        F = make_field(q)
        for m in (1, 2):
            for t in range(q**m * (q - 1) + 1):
                G = cod.generator_matrix_x0(q, m, t)
                if cod.rank(F, G.rows) != sgp.dim_L(sgp.SemigroupSpec("T", q, m), t):
                    bad.append(("rank", q, m, t))
                if q ** (2 * G.shape[0]) <= 10**7:
                    brute += 1
                    if cod.min_distance_bruteforce(G) < G.shape[1] - t:
                        bad.append(("distance", q, m, t))
    d_small = cod.min_distance_bruteforce(cod.generator_matrix_x0(2, 1, 2))
    n_aut = 0
    for q in (2, 3):
        for m in (1, 2):
            for sigma in grp.decomposition_generators(q, m):
                for t in range(q**m * (q - 1) + 1):
                    n_aut += 1
                    if not cod.code_automorphism_check(sigma, t):
                        bad.append(("automorphism", q, m, sigma.params, t))
    ok = not bad and d_small == 2
    return record(7, ok, f"rank = dim_L everywhere; {brute} codes brute-forced with d >= n - t; [4,2] code d = {d_small}; {n_aut} automorphism checks; bad {bad}")


# -- 8: Gilbert-Varshamov ----------------------------------------------------------------------------


def check_gv() -> bool:
    intervals = {q: cod.gv_scan(q, step=1e-4, max_m=0).interval for q in (2, 3, 4, 5, 7, 8, 9)}
    gv_ok = all(intervals[q] is None for q in (2, 3, 4, 5)) and all(intervals[q] is not None for q in (7, 8, 9))
    dom = {(q, m): cod.z_dominates(q, m) for q in (2, 3, 4, 5, 7, 8, 9) for m in (1, 2)}
    full = [
        (p, sgp.genus("T", q, m))
        for q in (2, 3, 4, 5, 7, 8, 9)
        for m in (1, 2)
        for p in cod.undominated_points(q, m, riemann_roch_only=False)
    ]
    below_rr = all(p.t < 2 * g - 1 for p, g in full)
    shown = {q: tuple(round(x, 4) for x in iv) for q, iv in intervals.items() if iv}
    ok = gv_ok and all(dom.values())
    return record(
        8,
        ok,
        f"crossing intervals {shown}, empty for q <= 5; Z dominates T for m in (1, 2) over t >= 2g-1: {all(dom.values())}; "
        f"over all t {len(full)} T points stay undominated (all with t < 2g-1: {below_rr}, max rate {max(p.rate for p, _ in full):.3f})",
    )


CHECKS = {
    1: check_places,
    2: check_genus,
    3: check_groups,
    4: check_exceptional,
    5: check_symbolic,
    6: check_subtower,
    7: check_codes,
    8: check_gv,
}


@pytest.mark.parametrize("n", sorted(CHECKS), ids=lambda n: f"criterion{n}")
def test_acceptance(n):
    assert CHECKS[n](), line(n)


if __name__ == "__main__":
    results = [fn() for fn in CHECKS.values()]
    sys.exit(0 if all(results) else 1)
