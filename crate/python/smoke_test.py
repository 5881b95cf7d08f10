#!/usr/bin/env python3
"""Smoke test for the curvlab_py extension module.

Builds the cdylib if needed, copies it next to a temp directory under an
importable name, and exercises the main types and operations end to end.

Usage: python3 python/smoke_test.py
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_or_build_extension() -> Path:
    candidates = [
        REPO / "target" / "release" / "libcurvlab_py.so",
        REPO / "target" / "debug" / "libcurvlab_py.so",
    ]
    for c in candidates:
        if c.exists():
            return c
    print("building curvlab-py (cargo build -p curvlab-py --release) ...")
    subprocess.run(
        ["cargo", "build", "-p", "curvlab-py", "--release"],
        cwd=REPO,
        check=True,
    )
    return candidates[0]


def main() -> int:
    so = locate_or_build_extension()
    staging = Path(tempfile.mkdtemp(prefix="curvlab-py-"))
    shutil.copy(so, staging / "curvlab_py.so")
    sys.path.insert(0, str(staging))

    import curvlab_py as cl

    checks = 0

    def ok(label: str, condition: bool) -> None:
        nonlocal checks
        if not condition:
            print(f"FAIL {label}")
            sys.exit(1)
        checks += 1
        print(f"PASS {label}")

    # Exact polynomial arithmetic.
    p = cl.Polynomial.parse(["u", "v"], "(u+v)*(u-v)")
    q = cl.Polynomial.parse(["u", "v"], "u^2 - v^2")
    ok("polynomial expansion is canonical", p == q)
    dp = p.diff("u")
    ok("derivative d/du (u^2 - v^2) = 2u", str(dp) == "2*u")
    s = p.substitute({"u": "3", "v": "1/2"})
    ok("substitution is exact", str(s) == "35/4")

    # The order-2 metric: signature and Szabo nilpotency.
    g2 = cl.Metric.family("szabo", 2)
    ok("g2 has signature (2,2)", g2.signature() == (2, 2))
    ok("g2 determinant is 1", g2.determinant() == "1")
    ok("R(X,U,U,X) = u on g2", g2.riemann_entry(0, 1, 1, 0) == "u")
    szabo = g2.operator("szabo")
    report = szabo.nilpotency()
    ok("g2 Szabo operator has order 2", report["nilpotent"] and report["order"] == 2)
    ok("g2 Szabo power traces vanish", szabo.power_traces_zero())

    # Rank varies with the direction (the non-Jordan behaviour).
    bindings = {c: "0" for c in g2.coords()}
    bindings.update({"xi0": "0", "xi1": "1", "xi2": "0", "xi3": "0"})
    ok("rank 1 along e1", szabo.rank_at(bindings) == 1)
    bindings.update({"xi0": "1", "xi1": "0"})
    ok("rank 0 along e0", szabo.rank_at(bindings) == 0)

    # Jacobi order of the quadratic family.
    o3 = cl.Metric.family("osserman", 3)
    jreport = o3.operator("jacobi").nilpotency()
    ok("osserman n=3 Jacobi order 3", jreport["order"] == 3)
    ok("osserman n=3 signature (2,3)", o3.signature() == (2, 3))

    # Skew-symmetric curvature operator order for n=4.
    o4 = cl.Metric.family("osserman", 4)
    ok("skew order 3 at n=4", o4.operator("skew").nilpotency()["order"] == 3)

    # Pointwise variant: order depends on the point.
    pw = cl.Metric.family("pointwise-szabo", 2)
    op = pw.operator("szabo")
    origin = {c: "0" for c in pw.coords()}
    ones = {c: "1" for c in pw.coords()}
    ok("pointwise order 1 at origin", op.nilpotency(point=origin)["order"] == 1)
    ok("pointwise order 2 at all-ones", op.nilpotency(point=ones)["order"] == 2)

    # General g_f with nonzero Ricci: not nilpotent, certificate included.
    f = cl.Polynomial.parse(["u1"], "-(u1^2)")
    gf = cl.Metric.gf(f, [["1"]])
    verdict = gf.operator("jacobi").nilpotency()
    ok("definite-Xi g_f Jacobi is not nilpotent", verdict["nilpotent"] is False)
    ok("ricci operator squares to zero", gf.operator("ricci").nilpotency()["order"] <= 2)

    # Metric text round trip.
    again = cl.Metric.from_text(g2.to_text())
    ok("text round trip preserves signature", again.signature() == g2.signature())

    # Span checks at desk scale.
    ok("R_L span fills dimension 6 at m=3", cl.span_check("curvature", 3) == (6, 6))

    print(f"smoke test: {checks} checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
