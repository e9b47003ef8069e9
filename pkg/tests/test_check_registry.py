"""
Tests for check lookup and wildcard selection
"""
import pytest

from dirac_verify.models import ScenarioConfig
from dirac_verify.services.check_registry import (
    CheckContext,
    CheckOutcome,
    CheckRegistry,
    get_check_registry,
)
from tests.conftest import scenario_dict


def _noop(ctx):
    return CheckOutcome(0.0, 1.0)


@pytest.fixture
def registry():
    registry = CheckRegistry()
    for check_id in ("alpha.one", "alpha.two", "beta.one"):
        registry.register(check_id, f"{check_id} check", _noop)
    return registry


def test_full_catalog_is_registered():
    registry = get_check_registry()
    for check_id in (
        "clifford.anticommutation",
        "modules.axioms",
        "fields.capacity",
        "operators.bochner_defining",
        "pauli.witness",
        "lagrangians.lambda_dm",
    ):
        assert check_id in registry
    assert {spec.suite for spec in registry.all()} >= {"clifford", "operators", "pauli", "lagrangians"}


def test_resolve_keeps_declared_order_without_duplicates(registry):
    specs = registry.resolve(["beta.one", "alpha.*", "alpha.one"])
    assert [s.check_id for s in specs] == ["beta.one", "alpha.one", "alpha.two"]
    assert len(registry.resolve(["*"])) == 3


def test_resolve_unknown_pattern(registry):
    with pytest.raises(KeyError, match="unknown check 'gamma.\\*'"):
        registry.resolve(["gamma.*"])
    assert registry.unknown(["alpha.one", "nope", "beta.*"]) == ["nope"]


def test_get_unknown_id(registry):
    with pytest.raises(KeyError, match="unknown check"):
        registry.get("alpha.three")


def test_duplicate_registration(registry):
    with pytest.raises(ValueError, match="already registered"):
        registry.register("alpha.one", "again", _noop)


def test_suite_of_spec(registry):
    assert registry.get("beta.one").suite == "beta"


def test_outcome_status():
    assert CheckOutcome(1e-12, 1e-10).passed
    assert not CheckOutcome(1e-3, 1e-10).passed
    assert not CheckOutcome(float("nan"), 1.0).passed
    skipped = CheckOutcome.skip("no Majorana module", signature="(4,0,+)")
    assert skipped.passed and skipped.skipped
    assert skipped.details == {"signature": "(4,0,+)"}


def test_context_tolerance_override_and_samples():
    config = ScenarioConfig(**scenario_dict(tolerances={"alpha.one": 0.5}, samples=3))
    ctx = CheckContext(config, "alpha.one")
    assert ctx.tolerance(1e-10) == 0.5
    assert CheckContext(config, "alpha.two").tolerance(1e-10) == 1e-10
    assert ctx.samples(20) == 3
    assert ctx.capacity >= 4 * config.band + 2


def test_heavy_checks_keep_the_band_on_one_axis_above_dimension_two():
    two = CheckContext(ScenarioConfig(**scenario_dict()), "alpha.one")
    four = CheckContext(ScenarioConfig(**scenario_dict(p=3, q=1, band=1)), "alpha.one")
    assert two.heavy_axes == 2
    assert four.heavy_axes == 1
    assert four.band == 1


def test_context_default_twist_in_dimension_two():
    config = ScenarioConfig(**scenario_dict())
    module = CheckContext(config, "alpha.one").twisted()
    assert module.twist_dim == 2
    assert module.dim == 8
