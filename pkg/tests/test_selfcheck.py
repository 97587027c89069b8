import math

import numpy as np
import pytest

from sekine import algebra
from sekine.selfcheck import CHECKS, CheckResult, random_element, run_selfcheck


@pytest.mark.parametrize("k", [2, 3, 4])
def test_all_checks_pass(k):
    results = run_selfcheck(k)
    assert len(results) == len(CHECKS)
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_filter_selects_checks():
    results = run_selfcheck(2, only=lambda name: "Haar" in name)
    assert results and all("Haar" in r.name for r in results)


def test_wrong_phase_in_delta_is_detected(monkeypatch):
    monkeypatch.setattr(algebra, "_DELTA_ETA_SIGN", -1)
    algebra._delta_basis.cache_clear()
    try:
        failed = {r.name for r in run_selfcheck(3) if not r.passed}
    finally:
        monkeypatch.undo()
        algebra._delta_basis.cache_clear()
    assert {"pi corepresentation", "convolution oracle"} <= failed
    assert all(r.passed for r in run_selfcheck(3))


def test_check_result_line_and_exceptions():
    assert CheckResult("x", 1e-14, 1e-12).passed
    bad = CheckResult("y", math.inf, 1e-12)
    assert not bad.passed and "FAIL" in bad.line()


def test_random_element_is_reproducible():
    a = random_element(3, np.random.default_rng(4))
    b = random_element(3, np.random.default_rng(4))
    assert a.distance(b) == 0
