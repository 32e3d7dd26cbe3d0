"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification mismatch,
2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from . import autgroup as grp
from . import codes as cod
from . import places as plc
from . import semigroup as sgp
from . import subtower as sub
from .gf import prime_power

SCHEMA_VERSION = "1"
MAX_HEIGHT = 6
DEFAULT_GRID = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2), (4, 3), (5, 1), (5, 2)]
CLOSURE_CAP = 5000  # expected order above which `verify` skips the closure


class BadInput(ValueError):
    pass


@dataclass
class Report:
    command: str
    data: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)
    table: list | None = None  # rows for csv output, header first
    csv_text: str | None = None  # preformatted csv, wins over table

    def expect(self, check: str, expected, observed) -> bool:
        if expected != observed:
            self.mismatches.append({"check": check, "expected": expected, "observed": observed})
            return False
        return True

    def require(self, check: str, ok: bool) -> bool:
        return self.expect(check, True, bool(ok))

    @property
    def exit_code(self) -> int:
        return 1 if self.mismatches else 0

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": "pass" if not self.mismatches else "mismatch",
            "mismatches": self.mismatches,
            **self.data,
        }


# -- rendering -------------------------------------------------------------------------


def _text_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _text_lines(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _text_lines(v, f"{prefix}{i}.")
    else:
        value = " ".join(map(str, obj)) if isinstance(obj, list) else obj
        yield f"{prefix[:-1]}: {value}"


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        if report.csv_text is not None:
            return report.csv_text
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if report.table is not None:
            w.writerows(report.table)
        else:
            w.writerow(["key", "value"])
            for line in _text_lines(report.to_json()):
                k, _, v = line.partition(": ")
                w.writerow([k, v])
        return buf.getvalue()
    return "\n".join(_text_lines(report.to_json())) + "\n"


# -- validation ------------------------------------------------------------------------


def _q(q: int) -> int:
    if q is None:
        raise BadInput("--q is required")
    try:
        prime_power(q)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    return q


def _m(m: int, lo: int = 1) -> int:
    if m is None:
        raise BadInput("--m is required")
    if not lo <= m <= MAX_HEIGHT:
        raise BadInput(f"--m must lie in {lo}..{MAX_HEIGHT}")
    return m


def _r(q: int, r: int | None) -> list[int]:
    if r is None:
        return sub.divisors_of(q - 1)
    if r < 1 or (q - 1) % r:
        raise BadInput(f"--r={r} must divide q-1={q - 1}")
    return [r]


def _kind(tower: str) -> str:
    return {"t": "T", "z": "Z", "s": "I"}[tower]


# -- subcommands ---------------------------------------------------------------------


def cmd_places(a) -> Report:
    q, m = _q(a.q), _m(a.m)
    rep = Report("places")
    if a.tower == "z":
        zs = sub.enumerate_z_places(q, m)
        rep.expect("n1", plc.n1_formula(q, m, "Z"), len(zs))
        rep.data.update(q=q, m=m, tower="Z", total=len(zs), places=[z.to_json() for z in zs])
        rep.table = [["variant", "params"]] + [[z.variant, " ".join(map(str, z.params))] for z in zs]
        return rep
    if a.tower == "s":
        raise BadInput("place listing supports --tower t or z; use `subtower` for counts of S_m")
    try:
        ps = plc.enumerate_places(q, m)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    rep.expect("n1", plc.n1_formula(q, m, "T"), ps.total)
    rep.expect("split_count", q ** (m + 1) * (q - 1), ps.n_split)
    rep.data.update(ps.to_json())
    rep.data["tower"] = "T"
    rep.table = list(csv.reader(io.StringIO(ps.to_csv())))
    return rep


def cmd_genus(a) -> Report:
    q, m = _q(a.q), _m(a.m, 0)
    rep = Report("genus")
    kind = _kind(a.tower)
    rs = _r(q, a.r) if kind == "I" else [None]
    rows = []
    for r in rs:
        sg = sgp.SemigroupSpec(kind, q, m, r)
        g = sg.genus
        rep.expect(f"gaps_equal_genus[r={r}]", g, len(sgp.gaps(sg)))
        rows.append({"kind": kind, "r": r, "genus": g, "conductor": sg.conductor})
    if kind in "TZ":
        rep.require("hurwitz_identity", sgp.hurwitz_identity_holds(q, m))
    rep.data.update(q=q, m=m, results=rows)
    rep.table = [["kind", "r", "genus", "conductor"]] + [[x["kind"], x["r"] or "", x["genus"], x["conductor"]] for x in rows]
    return rep


def cmd_semigroup(a) -> Report:
    q, m = _q(a.q), _m(a.m, 0)
    kind = _kind(a.tower)
    r = _r(q, a.r)[-1] if kind == "I" else None
    sg = sgp.SemigroupSpec(kind, q, m, r)
    rep = Report("semigroup")
    summary = sg.summary()
    rep.expect("gaps_equal_genus", summary["genus"], len(summary["gaps"]))
    if a.t is not None:
        if a.t < 0:
            raise BadInput("--t must be non-negative")
        summary["t"] = a.t
        summary["dim_L"] = sgp.dim_L(sg, a.t)
    rep.data.update(summary)
    rep.table = list(csv.reader(io.StringIO(sg.to_csv())))
    return rep


def cmd_autgroup(a) -> Report:
    q, m = _q(a.q), _m(a.m)
    if m > 4 or q > 9:
        raise BadInput("automorphism computations support q <= 9 and m <= 4")
    rep = Report("autgroup")
    decomp = grp.decomposition_generators(q, m)
    movers, rejected = grp.conjugator_candidates(q, m)
    gens = decomp + movers
    rep.require("generators_verified", all(f.verify() for f in gens))
    rep.expect("decomposition_count", q ** grp.epsilon(q, m) * (q - 1), len(decomp))
    rep.data.update(
        q=q,
        m=m,
        decomposition_generators=len(decomp),
        conjugators=len(movers),
        rejected=[{"family": f.label, "params": list(f.params)} for f in rejected],
    )
    if rejected:
        rep.mismatches.append({"check": "conjugators_verified", "expected": 0, "observed": len(rejected)})
    if a.closure:
        report = grp.automorphism_group(q, m)
        rep.data["group"] = report.to_json()
        for name, ok in report.checks.items():
            rep.require(name, ok)
        rep.expect("order", grp.expected_closure_order(q, m), report.order)
        rep.table = [["order", "stabilizer_order", "orbit_size", "structure_check"]] + [
            [report.order, report.stabilizer_order, len(report.orbit), report.structure_ok]
        ]
    return rep


def cmd_subtower(a) -> Report:
    q, m = _q(a.q), _m(a.m)
    rep = Report("subtower")
    zs = sub.enumerate_z_places(q, m)
    rep.expect("z_places", plc.n1_formula(q, m, "Z"), len(zs))
    counts: dict[str, int] = {}
    for z in zs:
        counts[z.variant] = counts.get(z.variant, 0) + 1
    rep.data.update(q=q, m=m, z_places=len(zs), z_counts=counts)
    if m <= 4 and q <= 9:
        ff = sub.fixed_field_check(q, m)
        rep.require("fixed_field", ff.stabilizer_fixes and ff.p_a_fixes)
        rep.require("fixed_field_tight", ff.tight)
        rep.require("z_reflection", sub.z_reflection_check(q, m))
        rep.data["fixed_field_cut"] = ff.cut
    inter = []
    for r in _r(q, a.r):
        res = sub.intermediate_enumerate(q, m, r)
        rep.require(f"k_bounds[r={r}]", res.k_in_bounds)
        inter.append(res.to_json())
    rep.data["intermediate"] = inter
    rep.table = [["r", "rational_places", "genus", "k", "k_in_bounds"]] + [
        [x["r"], x["rational_places"], x["genus"], x["k"], x["k_in_bounds"]] for x in inter
    ]
    return rep


def cmd_codes(a) -> Report:
    q = _q(a.q)
    rep = Report("codes")
    if a.gv:
        gv = cod.gv_scan(q)
        rep.data["gv"] = gv.to_json()
        rep.data["z_dominates"] = {str(m): cod.z_dominates(q, m) for m in (1, 2)}
        rep.table = [["delta_lo", "delta_hi", "max_gap"]] + [
            [*(gv.interval or ("", "")), f"{gv.max_gap:.6f}"]
        ]
        return rep
    m = _m(a.m)
    kind = _kind(a.tower)
    if kind == "I":
        raise BadInput("codes support --tower t or z")
    top = q**m * (q - 1)
    ts = [a.t] if a.t is not None else list(range(top + 1))
    rows = []
    for t in ts:
        try:
            p = cod.one_point_params(q, m, kind, t)
        except ValueError as exc:
            raise BadInput(str(exc)) from exc
        rep.require(f"ag_bound[t={t}]", cod.ag_bound_holds(p))
        rows.append(p)
        if kind == "T" and t <= top:
            G = cod.generator_matrix_x0(q, m, t)
            rep.expect(f"rank[t={t}]", p.k, cod.rank(G.field, G.rows))
    rep.data.update(q=q, m=m, kind=kind, params=[dict(zip(cod.PARAM_HEADER, p.row())) for p in rows])
    if a.matrix:
        if a.t is None or kind != "T":
            raise BadInput("--matrix needs --t and --tower t")
        G = cod.generator_matrix_x0(q, m, a.t)
        rep.data["generator_matrix"] = G.rows.tolist()
        rep.csv_text = G.to_csv()
        return rep
    rep.table = [cod.PARAM_HEADER] + [p.row() for p in rows]
    return rep


def _verify_pair(q: int, m: int, rep: Report) -> dict:
    tag = f"({q},{m})"
    out: dict = {"q": q, "m": m}
    ps = plc.enumerate_places(q, m)
    out["n1"] = ps.total
    rep.expect(f"{tag} n1", plc.n1_formula(q, m, "T"), ps.total)
    g = sgp.genus("T", q, m)
    out["genus"] = g
    rep.expect(f"{tag} gaps", g, len(sgp.gaps(sgp.SemigroupSpec("T", q, m))))
    rep.expect(f"{tag} z_gaps", sgp.genus("Z", q, m), len(sgp.gaps(sgp.SemigroupSpec("Z", q, m))))
    rep.require(f"{tag} hurwitz_identity", sgp.hurwitz_identity_holds(q, m))
    zs = sub.enumerate_z_places(q, m)
    out["z_places"] = len(zs)
    rep.expect(f"{tag} z_places", plc.n1_formula(q, m, "Z"), len(zs))
    ff = sub.fixed_field_check(q, m)
    rep.require(f"{tag} fixed_field", ff.ok)
    rep.require(f"{tag} kummer", sub.kummer_identities(q, m))
    for r in sub.divisors_of(q - 1):
        rep.require(f"{tag} k_bounds[r={r}]", sub.intermediate_enumerate(q, m, r).k_in_bounds)
    if grp.expected_closure_order(q, m) <= CLOSURE_CAP:
        report = grp.automorphism_group(q, m)
        out.update(order=report.order, stabilizer_order=report.stabilizer_order, orbit=len(report.orbit))
        for name, ok in report.checks.items():
            rep.require(f"{tag} {name}", ok)
        if m >= 2:
            h = report.hurwitz
            out["hurwitz"] = {"conclusive": h.conclusive, "exceptional": h.exceptional, "consistent": h.consistent}
    return out


def cmd_verify(a) -> Report:
    rep = Report("verify")
    if a.grid:
        pairs = DEFAULT_GRID
    else:
        pairs = [(_q(a.q), _m(a.m))]
        if pairs[0][0] > 9 or pairs[0][1] > 4:
            raise BadInput("verify supports q <= 9 and m <= 4")
    results = [_verify_pair(q, m, rep) for q, m in pairs]
    rep.data["results"] = results
    keys = ["q", "m", "n1", "genus", "z_places", "order", "stabilizer_order", "orbit"]
    rep.table = [keys] + [[r.get(k, "") for k in keys] for r in results]
    return rep


COMMANDS = {
    "places": cmd_places,
    "genus": cmd_genus,
    "semigroup": cmd_semigroup,
    "autgroup": cmd_autgroup,
    "subtower": cmd_subtower,
    "codes": cmd_codes,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--tower", choices=["t", "z", "s"], default="t")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", metavar="PATH")

    parser = argparse.ArgumentParser(prog="normtrace", description="Norm-trace tower computations.")
    subs = parser.add_subparsers(dest="command", required=True)
    subs.add_parser("places", parents=[common], help="enumerate rational places")
    subs.add_parser("genus", parents=[common], help="genus and gap count")
    subs.add_parser("semigroup", parents=[common], help="Weierstrass semigroup of the pole")
    p = subs.add_parser("autgroup", parents=[common], help="automorphisms and their closure")
    p.add_argument("--closure", action="store_true", help="compute the generated group")
    subs.add_parser("subtower", parents=[common], help="decomposition and intermediate towers")
    p = subs.add_parser("codes", parents=[common], help="one-point code tables")
    p.add_argument("--matrix", action="store_true", help="export the x_0 generator matrix")
    p.add_argument("--gv", action="store_true", help="Gilbert-Varshamov comparison")
    p = subs.add_parser("verify", parents=[common], help="run the verification checks")
    p.add_argument("--grid", action="store_true", help="all default (q, m) pairs")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.command](args)
    except ValueError as exc:  # BadInput and out-of-range requests
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:  # an internal consistency check failed
        print(json.dumps({"mismatches": [{"check": "internal", "detail": str(exc)}]}), file=sys.stderr)
        return 1
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report.mismatches:
        print(json.dumps({"mismatches": report.mismatches}, sort_keys=True), file=sys.stderr)
    return report.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
