"""The eleven acceptance criteria, each at its stated tolerance and runtime budget.

Every test prints one ``PASS``/``FAIL`` line. Run standalone with
``python tests/test_acceptance.py`` for just those lines.
"""

import sys
import time

import pytest

from cmclab import experiments

# number, label, experiment name, overrides, runtime budget in seconds
CRITERIA = [
    (1, "SSCMC jets", "sscmc-jets", {}, 1.0),
    (2, "SSCMC scalar curvature", "sscmc-scalar", {}, 10.0),
    (3, "AH profile cubic coefficient", "ah-profile", {}, 5.0),
    (4, "hyperboloid calibration", "custom", {}, 5.0),
    (5, "barrier mean-curvature defect", "barrier", {}, 30.0),
    (6, "compatibility residual", "compat", {}, 5.0),
    (7, "traceless decay ladder", "adecay", {}, 60.0),
    (8, "asymptotically hyperbolic deviation", "ah-check", {}, 30.0),
    (9, "horizon slope and chart consistency", "horizon-slope", {}, 10.0),
    (10, "totally geodesic boundary", "boundary-geodesic", {}, 5.0),
    (11, "identity suite", "horizon-residual", {}, 60.0),
]


def evaluate(number, label, name, overrides, budget):
    t0 = time.perf_counter()
    result = experiments.run(name, overrides)
    elapsed = time.perf_counter() - t0
    ok = result.passed and elapsed < budget
    failed = [c.line() for c in result.checks if not c.passed]
    if elapsed >= budget:
        failed.append(f"runtime {elapsed:.2f} s over budget {budget:g} s")
    line = f"[acceptance {number:2d}] {label}: {'PASS' if ok else 'FAIL'} ({len(result.checks)} checks, {elapsed:.2f} s)"
    return ok, line, result, failed


@pytest.mark.parametrize("number,label,name,overrides,budget", CRITERIA, ids=[f"c{c[0]:02d}-{c[2]}" for c in CRITERIA])
def test_criterion(number, label, name, overrides, budget, capsys):
    ok, line, result, failed = evaluate(number, label, name, overrides, budget)
    with capsys.disabled():
        print("\n" + line)
        for check in result.checks:
            print("    " + check.line())
    assert ok, "\n".join(failed)


if __name__ == "__main__":
    status = 0
    for crit in CRITERIA:
        ok, line, _, failed = evaluate(*crit)
        print(line)
        for f in failed:
            print("    " + f)
        status |= not ok
    sys.exit(status)
