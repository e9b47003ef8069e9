"""
Tests for signature and scenario models
"""
import pytest
from pydantic import ValidationError

from dirac_verify.config import settings
from dirac_verify.models import (
    CheckResult,
    CheckStatus,
    RunReport,
    ScenarioConfig,
    Signature,
    TwistDims,
)
from tests.conftest import scenario_dict


def test_signature_rejects_odd_dimension():
    with pytest.raises(ValidationError, match="even"):
        Signature(p=2, q=1)


def test_signature_rejects_bad_epsilon():
    with pytest.raises(ValidationError, match="epsilon"):
        Signature(p=2, q=0, epsilon=2)


@pytest.mark.parametrize(
    "p,q,expected",
    [(2, 0, True), (1, 1, False), (3, 1, True), (4, 0, False), (1, 3, True), (0, 4, False)],
)
def test_majorana_modules_follow_chirality_exponent(p, q, expected):
    sig = Signature(p=p, q=q)
    assert sig.admits_majorana is expected
    assert sig.chirality_exponent == sig.n * (sig.n - 1) // 2 + q


def test_signature_label_and_metric():
    sig = Signature(p=3, q=1, epsilon=-1)
    assert sig.label == "(3,1,-)"
    assert list(sig.eta) == [1.0, 1.0, 1.0, -1.0]
    # epsilon eta_j = +1 only along the negative direction
    assert sig.on_shell_directions() == [3]


def test_scenario_defaults_come_from_settings():
    config = ScenarioConfig(p=2, q=0)
    assert config.seed == settings.default_seed
    assert config.band == settings.default_band
    assert config.effective_capacity == settings.capacity_for(config.band)


def test_effective_capacity_follows_the_capacity_setting(monkeypatch):
    monkeypatch.setattr(settings, "default_capacity", 20)
    assert ScenarioConfig(p=2, q=0, band=1).effective_capacity == 20
    assert ScenarioConfig(p=2, q=0, band=5).effective_capacity == 22
    assert ScenarioConfig(p=2, q=0, band=1, capacity=8).effective_capacity == 8


def test_scenario_rejects_small_capacity():
    with pytest.raises(ValidationError, match="4K\\+2"):
        ScenarioConfig.model_validate(scenario_dict(band=2, capacity=9))


def test_scenario_propagates_signature_errors():
    with pytest.raises(ValidationError):
        ScenarioConfig.model_validate(scenario_dict(p=3, q=0))


def test_twist_dims_must_not_be_empty():
    with pytest.raises(ValidationError):
        TwistDims(v_r=0, v_l=0, e_r=0, e_l=0)
    assert TwistDims().total == 3


def test_run_report_passes_with_skips_only():
    report = RunReport(
        scenario="s",
        signature="(2,0,+)",
        seed=1,
        results=[
            CheckResult(check_id="a.b", status=CheckStatus.PASSED),
            CheckResult(check_id="a.c", status=CheckStatus.SKIPPED),
        ],
    )
    assert report.passed
    assert report.counts() == {"passed": 1, "failed": 0, "error": 0, "skipped": 1}

    report.results.append(CheckResult(check_id="a.d", status=CheckStatus.ERROR))
    assert not report.passed
