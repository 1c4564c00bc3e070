#!/usr/bin/env python3
"""Smoke test for the thermobound_py extension module.

Builds nothing itself: expects `cargo build -p thermobound-py` (or --release)
to have produced the cdylib, copies it next to a temp dir under the import
name, and exercises the bound surface end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_module():
    candidates = [
        ROOT / "target" / "release" / "libthermobound_py.so",
        ROOT / "target" / "debug" / "libthermobound_py.so",
        ROOT / "target" / "release" / "thermobound_py.dll",
        ROOT / "target" / "debug" / "thermobound_py.dll",
        ROOT / "target" / "release" / "libthermobound_py.dylib",
        ROOT / "target" / "debug" / "libthermobound_py.dylib",
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit("no built extension found; run `cargo build -p thermobound-py` first")


def import_module():
    built = locate_module()
    stage = Path(tempfile.mkdtemp(prefix="thermobound_py_"))
    target = stage / ("thermobound_py" + (".pyd" if built.suffix == ".dll" else ".so"))
    shutil.copy2(built, target)
    sys.path.insert(0, str(stage))
    import thermobound_py

    return thermobound_py


def close(a, b, tol=1e-10):
    assert abs(a - b) < tol, f"{a} vs {b} (|diff| = {abs(a - b):.3e})"


def main():
    tb = import_module()

    # Canonical sandwich on a pair of 3x3 Hermitian matrices.
    h1 = [
        [1.0, 0.3 + 0.1j, 0.0],
        [0.3 - 0.1j, -0.5, 0.2j],
        [0.0, -0.2j, 0.25],
    ]
    h2 = [
        [0.4, -0.2, 0.1 + 0.05j],
        [-0.2, 0.9, 0.0],
        [0.1 - 0.05j, 0.0, -1.1],
    ]
    s1 = tb.ThermalSpec(h1, 2.0)
    s2 = tb.ThermalSpec(h2, 7.0)
    for family in (tb.delta_s_bounds, tb.log_z_ratio_bounds, tb.helmholtz_bounds):
        b = family(s1, s2)
        assert b.lower <= b.exact <= b.upper, family.__name__
        assert b.validated
    b = tb.delta_s_bounds(s1, s2)
    close(b.exact - b.lower, b.slack_lower, 1e-12)
    close(b.upper - b.exact, b.slack_upper, 1e-12)
    close(tb.relative_entropy(s1, s2), b.slack_lower, 1e-15)
    assert tb.relative_entropy(s1, s2) >= 0.0

    # Exact entropy difference agrees with the per-state entropies.
    close(b.exact, s2.entropy() - s1.entropy(), 1e-12)

    # JSON round trip is exact.
    s1b = tb.ThermalSpec.from_json(s1.to_json())
    assert tb.delta_s_bounds(s1b, s2).exact == b.exact

    # Qubit closed form against the dense matrix route; the library uses the
    # spin-1/2 convention H = (h . sigma) / 2.
    n1, n2, theta, t1, t2 = 1.7, 0.8, 0.6, 3.0, 11.0
    qb = tb.qubit_bounds(n1, n2, math.cos(theta), t1, t2)
    hq1 = [[0.5 * n1, 0.0], [0.0, -0.5 * n1]]
    hq2 = [
        [0.5 * n2 * math.cos(theta), 0.5 * n2 * math.sin(theta)],
        [0.5 * n2 * math.sin(theta), -0.5 * n2 * math.cos(theta)],
    ]
    mb = tb.delta_s_bounds(tb.ThermalSpec(hq1, t1), tb.ThermalSpec(hq2, t2))
    close(qb.lower, mb.lower, 1e-12)
    close(qb.exact, mb.exact, 1e-12)
    close(qb.upper, mb.upper, 1e-12)

    # Grand-canonical reduction: mu = 0 with any number operator matches the
    # canonical result.
    num_op = [[1.0, 0.2], [0.2, 0.0]]
    g1 = tb.GrandThermalSpec(hq1, num_op, t1, 0.0)
    g2 = tb.GrandThermalSpec(hq2, num_op, t2, 0.0)
    gb = tb.grand_delta_s_bounds(g1, g2)
    close(gb.exact, mb.exact, 1e-12)
    close(gb.lower, mb.lower, 1e-12)
    assert tb.grand_log_z_ratio_bounds(g1, g2).validated
    assert tb.GrandThermalSpec.from_json(g1.to_json()).mu == 0.0

    # Oscillator closed forms and the truncated number-basis oracle.
    close(tb.cross_mean_frequencies(1.7, 1.3, 2.0), tb.fock_cross_mean(1.7, 1.3, 2.0), 1e-6)
    x = 1.3 / 2.0
    close(
        tb.entropy_oscillator(1.3, 2.0),
        x / math.expm1(x) - math.log(-math.expm1(-x)),
        1e-13,
    )
    ob = tb.oscillator_bounds("sqrt_linear", 4.0, 4.0, 3.0, 3.0)
    assert ob.lower == ob.exact == ob.upper == 0.0
    ob = tb.oscillator_bounds("paul_trap", 0.1, 2.0, 10.0, 10.0, eta=0.5)
    assert ob.lower <= ob.exact <= ob.upper

    # Error taxonomy: bad input is ValueError.
    for bad in (
        lambda: tb.ThermalSpec(h1, -4.0),
        lambda: tb.ThermalSpec([[1.0, 2.0]], 1.0),
        lambda: tb.ThermalSpec([[0.0, 1.0], [2.0, 0.0]], 1.0),
        lambda: tb.oscillator_bounds("no_such_profile", 1.0, 2.0, 1.0, 1.0),
        lambda: tb.fock_cross_mean(1.0, 1.0, 1.0, n=1),
    ):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
