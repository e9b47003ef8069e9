"""
Tests for scenario execution and status assignment
"""
import numpy as np
import pytest

from dirac_verify.core.fourier_fields import CapacityExceeded
from dirac_verify.models import CheckStatus, ScenarioConfig
from dirac_verify.services.check_registry import CheckOutcome, CheckRegistry
from dirac_verify.services.run_service import RunService, _json_ready
from tests.conftest import scenario_dict


def _passing(ctx):
    return CheckOutcome(1e-14, 1e-12, {"value": np.complex128(1 + 2j)})


def _failing(ctx):
    return CheckOutcome(1e-3, 1e-12)


def _capacity(ctx):
    raise CapacityExceeded("product of degrees 3 and 3 exceeds capacity 4")


def _broken(ctx):
    raise RuntimeError("boom")


def _skipped(ctx):
    return CheckOutcome.skip("signature admits no Majorana module")


@pytest.fixture
def service():
    registry = CheckRegistry()
    registry.register("fake.pass", "passes", _passing)
    registry.register("fake.fail", "fails", _failing)
    registry.register("fake.capacity", "runs out of band", _capacity)
    registry.register("fake.error", "raises", _broken)
    registry.register("fake.skip", "skips", _skipped)
    return RunService(registry, threads=1)


def _config(**overrides):
    return ScenarioConfig(**scenario_dict(**overrides))


def test_empty_check_list_passes(service):
    report = service.run(_config())
    assert report.results == []
    assert report.passed


def test_statuses(service):
    report = service.run(_config(checks=["fake.*"]))
    status = {r.check_id: r.status for r in report.results}
    assert status == {
        "fake.pass": CheckStatus.PASSED,
        "fake.fail": CheckStatus.FAILED,
        "fake.capacity": CheckStatus.FAILED,
        "fake.error": CheckStatus.ERROR,
        "fake.skip": CheckStatus.SKIPPED,
    }
    assert not report.passed
    assert report.counts() == {"passed": 1, "failed": 2, "error": 1, "skipped": 1}


def test_messages_and_details(service):
    report = service.run(_config(), checks=["fake.capacity", "fake.error", "fake.pass", "fake.skip"])
    capacity, error, passed, skipped = report.results
    assert capacity.message.startswith("capacity exceeded:")
    assert error.message == "RuntimeError: boom"
    assert passed.details == {"value": [1.0, 2.0]}
    assert passed.residual == pytest.approx(1e-14)
    assert skipped.residual is None and skipped.tolerance is None


def test_skips_do_not_fail_a_run(service):
    report = service.run(_config(checks=["fake.pass", "fake.skip"]))
    assert report.passed


def test_threads_keep_declared_order(service):
    threaded = RunService(service.registry, threads=2)
    report = threaded.run(_config(checks=["fake.*"]))
    assert [r.check_id for r in report.results] == [
        "fake.pass", "fake.fail", "fake.capacity", "fake.error", "fake.skip",
    ]
    assert report.threads == 2


def test_unknown_check_raises(service):
    with pytest.raises(KeyError):
        service.run(_config(checks=["fake.missing"]))


def test_json_ready():
    value = {"a": np.float64(1.5), "b": np.array([1 + 1j, 2]), 3: (np.int64(4),)}
    assert _json_ready(value) == {"a": 1.5, "b": [[1.0, 1.0], [2.0, 0.0]], "3": [4]}
