#!/usr/bin/env python3
"""Smoke test for the berkrh_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/ (debug
or release), exposes it under the importable name berkrh_py, and exercises
the main types and operations end to end.

Usage:
    cargo build -p berkrh-py            # or --release
    python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import sys
import tempfile


def locate_extension():
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = []
    for profile in ("release", "debug"):
        for name in ("libberkrh_py.so", "libberkrh_py.dylib", "berkrh_py.dll"):
            candidates.append(root / "target" / profile / name)
    for path in candidates:
        if path.exists():
            return path
    sys.exit("extension not found; run `cargo build -p berkrh-py` first")


def import_module():
    src = locate_extension()
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="berkrh_py_"))
    suffix = ".pyd" if src.suffix == ".dll" else ".so"
    shutil.copy2(src, tmp / f"berkrh_py{suffix}")
    sys.path.insert(0, str(tmp))
    import berkrh_py

    return berkrh_py


def main():
    rh = import_module()
    failures = []

    def check(name, got, want):
        ok = got == want
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {got!r}" + ("" if ok else f" (expected {want!r})"))
        if not ok:
            failures.append(name)

    # exact valuations
    check("padic_val(50, 5)", rh.padic_val("50", 5), "2")
    check("padic_val(3/25, 5)", rh.padic_val("3/25", 5), "-2")
    check("padic_val(0, 7)", rh.padic_val("0", 7), "inf")

    # valuation polygon of 5T^4 - 1
    polygon = rh.Polygon(json.dumps({"4": "5", "0": "-1"}), 5)
    check("polygon breakpoints", polygon.breakpoints(), ["-1/4"])
    check("polygon eval at -1/4", polygon.eval_v("-1/4"), "0")
    check("roots at v = -1/4", polygon.count_zero_valuations("-1/4", "-1/4"), 4)
    check("roots with v > 0", polygon.count_zero_valuations("0", "inf", False, True), 0)

    # domains
    unit = rh.Domain.closed_unit_disc()
    unit.validate(5)
    check("chi(closed unit disc)", unit.euler_char(), 1)
    check("chi(P1)", rh.Domain.projective_line().euler_char(), 2)
    annulus = json.dumps(
        {
            "genus": 0,
            "removed_open": [
                {"center": "inf", "log_radius": "0"},
                {"center": "0", "log_radius": "1"},
            ],
            "removed_closed": [],
        }
    )
    check("chi(annulus)", rh.euler_char(annulus), 0)

    # germ invariants of the two standard lifts toward infinity
    frob = rh.Map(json.dumps({"5": "1"}))
    etale = rh.Map(json.dumps({"5": "1", "1": "-1"}))
    g1 = rh.germ(frob, "inf", "0", "inside", "inf", 5)
    check("germ of x^5", (g1["d"], g1["sigma"], g1["nu"], g1["eps_val"]), (5, 4, 0, "1"))
    g2 = rh.germ(etale, "inf", "0", "inside", "inf", 5)
    check("germ of x^5 - x", (g2["d"], g2["sigma"], g2["nu"]), (5, 8, 4))

    # ramification counts and degrees
    check("critical count of x^5 in unit disc", rh.critical_count(frob, unit, 5), 4)
    check("critical count of x^5 - x in unit disc", rh.critical_count(etale, unit, 5), 0)
    check("degree over unit disc", rh.degree_over_domain(etale, unit, ["0"], 5), 5)

    # skeleton mapping
    cube = rh.Map(json.dumps({"3": "1"}))
    check("skeleton probe of x^3", rh.skeleton_probe(cube, "0", "1", 5), (3, "3"))

    # full balance check
    morphism = json.dumps(
        {
            "map": {"num": {"5": "1", "1": "-1"}},
            "domain": {
                "genus": 0,
                "removed_open": [{"center": "inf", "log_radius": "0"}],
                "removed_closed": [],
            },
            "codomain": {
                "genus": 0,
                "removed_open": [{"center": "inf", "log_radius": "0"}],
                "removed_closed": [],
            },
            "direction_images": {"0": "0"},
            "p": 5,
        }
    )
    report = rh.rh_check(morphism)
    check("balance lhs", report["lhs"], 1)
    check("balance rhs", report["rhs"], 1)
    check("balanced", report["balanced"], True)
    check("nu at the outward end", report["nu_out"][0]["nu"], 4)

    # residue divisor certificates
    d1 = rh.charp_divisor(frob, ["0", "1"], 5)
    check("divisor of x^5 certified", d1["status"], "VERIFIED")
    check("sigma(0) for x^5", dict(map(tuple, d1["directions"]))["0"], 4)
    shifted = rh.Map(
        json.dumps({"5": "1", "4": "-5", "3": "10", "2": "-10", "1": "5"})
    )  # (x-1)^5 + 1
    d2 = rh.charp_divisor(shifted, ["0", "1"], 5)
    check("divisor of (x-1)^5+1 certified", d2["status"], "VERIFIED")
    check("sigma(0) for (x-1)^5+1", dict(map(tuple, d2["directions"]))["0"], 0)

    # ledger assembly
    graph = json.dumps(
        {
            "vertices": [
                {"id": "outer", "chi_piece": 0, "deg_local": 5, "ram_local": 0},
                {"id": "inner", "chi_piece": 1, "deg_local": 5, "ram_local": 0},
            ],
            "internal_edges": [
                {
                    "id": "split",
                    "end_a": {"vertex": "outer", "nu": 0},
                    "end_b": {"vertex": "inner", "nu": 0},
                }
            ],
            "external_ends": [
                {"vertex": "outer", "kind": "TY", "nu": 4, "label": "t(inf;0;in)"}
            ],
            "chi_x_pieces": [0, 1],
            "chi_total": 1,
            "deg": 5,
        }
    )
    assembled = rh.ledger_verify(graph)
    check("ledger assembly balanced", assembled["balanced"], True)

    if failures:
        sys.exit(f"{len(failures)} smoke checks failed: {failures}")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
