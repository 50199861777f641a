#!/usr/bin/env python3
"""Smoke test for the lcrm_py extension module.

Builds nothing itself: run `cargo build -p lcrm-py [--release]` first.
The script locates the compiled cdylib, exposes it under the importable
name, and exercises the bound surface end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "liblcrm_py.so",
        REPO / "target" / "debug" / "liblcrm_py.so",
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit("liblcrm_py.so not found; run `cargo build -p lcrm-py` first")
    newest = max(built, key=lambda p: p.stat().st_mtime)
    staging = Path(tempfile.mkdtemp(prefix="lcrm-py-"))
    shutil.copy2(newest, staging / "lcrm_py.so")
    sys.path.insert(0, str(staging))
    import lcrm_py

    return lcrm_py


def approx(a, b, tol=1e-9):
    assert abs(a - b) < tol, f"{a} != {b} (tol {tol})"


def main():
    m = load_module()
    print(f"loaded lcrm_py {m.__version__}")

    # Angular primitives.
    approx(m.wrap(3.0 * math.pi), math.pi, 1e-12)
    approx(m.wrap(-math.pi), math.pi, 1e-12)
    approx(m.atan2_paper(0.0, -1.0), math.pi, 1e-12)  # sgn(0) = +1
    approx(m.atan2_paper(1.0, 1.0), math.pi / 4.0, 1e-12)

    # Densities and masses.
    approx(m.pn_density(0.3, 0.0, 0.0), 1.0 / (2.0 * math.pi), 1e-15)
    approx(m.pn_density(0.0, 1.0, 0.0), 0.43218, 5e-6)
    approx(m.tpn_mass(2.0, 1.0, -math.pi, math.pi), 1.0, 1e-8)
    approx(m.tpn_mass(0.0, 0.0, -0.4, 0.4), 0.4 / math.pi, 1e-9)

    direction, resultant = m.mean_direction(5.0, 0.0)
    approx(direction, 0.0, 1e-6)
    assert 0.0 < resultant <= 1.0
    none_dir, zero_res = m.mean_direction(0.0, 0.0)
    assert none_dir is None and zero_res < 1e-8

    mdir, mprime, rate = m.slope_diagnostics((1.0, 3.0), (-2.0, 2.0), 0.0)
    approx(mprime, 1.6, 1e-12)

    s1sq, s2sq, rho = m.reconstruct_sigma_b(0.5, 2.0)
    approx(s1sq, 2.0, 1e-12)
    approx(s2sq, 1.0, 1e-12)
    approx(s1sq * s2sq * (1.0 - rho * rho), 1.0, 1e-10)

    # Samplers: membership and determinism.
    draws = m.sample_tpn(1.0, 0.0, -0.035, 0.035, 500, seed=9)
    assert all(-0.035 < d < 0.035 for d in draws)
    again = m.sample_tpn(1.0, 0.0, -0.035, 0.035, 500, seed=9)
    assert draws == again, "pinned-seed draws must reproduce"
    composite = m.sample_tpn(1.0, 0.0, -0.5, 0.5, 200, seed=3, mode="paper-composite")
    assert all(-0.5 < d < 0.5 for d in composite)

    tn = m.sample_truncated_normal(0.0, 1.0, 0.0, float("inf"), 20000, 4)
    mean_tn = sum(tn) / len(tn)
    approx(mean_tn, math.sqrt(2.0 / math.pi), 0.02)

    # Posterior summaries.
    import random

    random.seed(1)
    normals = [random.gauss(0.0, 1.0) for _ in range(20000)]
    lo, hi = m.hpd_interval(normals, 0.95)
    approx(lo, -1.96, 0.06)
    approx(hi, 1.96, 0.06)
    assert abs(m.geweke_z(normals)) < 3.0

    # Whole pipeline: simulate, validate, fit.
    csv_text = m.simulate_preset("table1", n=25, seed=11)
    report = m.validate_csv(csv_text)
    assert "no issues found" in report, report

    names, draws = m.fit_csv(
        csv_text,
        '{"iterations": 500, "burn_in": 200, "thin": 3, "seed": 2}',
    )
    assert len(draws) == 100
    assert len(names) == len(draws[0])
    beta10 = [row[names.index("beta1_0")] for row in draws]
    est = sum(beta10) / len(beta10)
    assert 4.0 < est < 13.0, f"beta1_0 estimate {est} wildly off truth 8.3"
    tau_col = [row[names.index("tau")] for row in draws]
    assert all(t > 0.0 for t in tau_col)

    fixture = m.fixture_csv()
    fixture_report = m.validate_csv(fixture)
    assert "33.93%" in fixture_report and "35.71%" in fixture_report, fixture_report

    print("smoke test passed: primitives, samplers, summaries, and a full fit")


if __name__ == "__main__":
    main()
