"""验证套件"""

import json

import pytest

from cornerlab.services.verify import CHECK_REGISTRY, format_line, invariant_manifest, run_check, run_verify

MODULES = {"zn_core", "fourier", "uniformity", "corners", "graphview", "partition", "driver"}

QUICK = ["marginal-sums", "parseval", "fourth-moment", "corner-count-enumerations", "density-split", "holder-step"]


def test_manifest_covers_every_module():
    manifest = invariant_manifest()
    assert set(manifest) == MODULES
    assert sum(len(v) for v in manifest.values()) == len(CHECK_REGISTRY)
    assert all(manifest[m] for m in MODULES)


def test_registry_trials():
    for spec in CHECK_REGISTRY.values():
        assert 1 <= spec.quick_trials <= spec.trials


@pytest.mark.parametrize("name", QUICK)
def test_quick_checks_pass(name):
    line = run_check(name, seed=1, quick=True)
    assert line.passed
    assert line.trials >= 1
    assert line.conclusion_held == line.hypothesis_satisfied


def test_output_is_deterministic():
    first = [format_line(line) for line in run_verify(7, quick=True, only=QUICK[:3])]
    second = [format_line(line) for line in run_verify(7, quick=True, only=QUICK[:3])]
    assert first == second
    record = json.loads(first[0])
    assert record["check"] == "marginal-sums"
    assert {"hypothesisSatisfied", "conclusionHeld", "worstMargin", "failures", "module", "trials"} <= set(record)


def test_only_keeps_registration_order():
    lines = run_verify(1, quick=True, only=["parseval", "marginal-sums"])
    assert [line.check for line in lines] == ["marginal-sums", "parseval"]


def test_unknown_check():
    assert run_verify(1, quick=True, only=["no-such-check"]) == []
    with pytest.raises(KeyError):
        run_check("no-such-check", seed=1)


@pytest.mark.parametrize("name", ["energy-decomposition", "energy-monotone", "spectral-criterion"])
def test_energy_checks_exercise_refinement(name):
    line = run_check(name, seed=1, quick=True)
    assert line.hypothesis_satisfied > 0
    assert line.passed
