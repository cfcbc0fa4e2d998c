#!/usr/bin/env python3
"""Smoke test for the hbmodel Python extension.

Builds nothing itself: run `cargo build -p hbmodel-python` first (or pass
--release and build in release mode). The script locates the cdylib,
exposes it under the importable name, and drives the main entry points.
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    profiles = ["release", "debug"] if "--release" in sys.argv else ["debug", "release"]
    names = ["libhbmodel.so", "libhbmodel.dylib", "hbmodel.dll"]
    for profile in profiles:
        for name in names:
            candidate = REPO / "target" / profile / name
            if candidate.exists():
                return candidate
    raise SystemExit(
        "extension not found; run `cargo build -p hbmodel-python` first"
    )


def main() -> None:
    cdylib = locate_cdylib()
    staging = Path(tempfile.mkdtemp(prefix="hbmodel_py_"))
    target = staging / ("hbmodel" + (".so" if cdylib.suffix != ".dll" else ".pyd"))
    shutil.copyfile(cdylib, target)
    sys.path.insert(0, str(staging))

    import hbmodel

    # fixtures are listed and serializable
    names = [name for name, _ in hbmodel.list_fixtures()]
    assert "poly-rot-2" in names and "broken-rot-2" in names, names
    assert '"degrees"' in hbmodel.fixture_json("poly-rot-2")

    # the workbench on the main fixture
    wb = hbmodel.Workbench("poly-rot-2")
    assert wb.cap == 10 and wb.window == 8, (wb.cap, wb.window)
    assert wb.dhb_is_zero
    assert all(passed for _, passed, _ in wb.validation())
    assert all(passed for _, passed in wb.identities())

    minimal, brute = wb.cohomology()
    assert minimal == brute, (minimal, brute)
    assert minimal == [1, 0, 3, 0, 3, 0, 3, 0, 3, 0, 3], minimal

    assert wb.extend("omega") == "omega + t*mu"
    assert wb.product("omega", "omega") == "2*t*muomega"
    wb.gamma_witness("omega", "omega")  # must not raise

    # a datum built from inline JSON behaves the same
    wb2 = hbmodel.Workbench(hbmodel.fixture_json("free-rotation"), cap=10)
    dhb = dict(wb2.dhb())
    assert dhb["dtheta"] == "-t*1", dhb
    assert not wb2.dhb_is_zero

    # rejections surface as ValueError
    su2 = hbmodel.Workbench("su2-free")
    try:
        su2.product("x3", "x3")
    except ValueError as e:
        assert "abelian" in str(e), e
    else:
        raise AssertionError("non-abelian product must be rejected")

    try:
        hbmodel.Workbench("broken-rot-2")
    except ValueError as e:
        assert "d i_1 + i_1 d" in str(e), e
    else:
        raise AssertionError("broken fixture must fail validation")

    # fixed-point calculus
    assert hbmodel.cpn_coefficients(["-4", "-1", "5"]) == ["0", "21", "20"]
    report = hbmodel.cpn_report(["-4", "-1", "5"], euler=["3", "-2", "6"])
    assert "relation: w^3 = 21*w*t^2 + 20*t^3" in report
    assert "volume: 9" in report

    cp2 = hbmodel.cp2_weighted(1, 3, "3")
    assert cp2["volume"] == "9"
    assert cp2["coefficients"] == ["0", "21", "20"]
    assert cp2["relation"] == "w^3 = 21*w*t^2 + 20*t^3"

    print("smoke test passed:", len(names), "fixtures,", "cap", wb.cap)


if __name__ == "__main__":
    main()
