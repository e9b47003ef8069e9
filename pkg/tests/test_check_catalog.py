"""
End-to-end runs of the registered checks
"""
from pathlib import Path

import pytest

from dirac_verify.models import CheckStatus, ScenarioConfig
from dirac_verify.parsers.scenario_parser import ScenarioParser
from dirac_verify.services.check_registry import get_check_registry
from dirac_verify.services.run_service import RunService
from tests.conftest import scenario_dict

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

CATALOG = [spec.check_id for spec in get_check_registry().all()]


@pytest.fixture(scope="module")
def service():
    return RunService(get_check_registry(), threads=1)


@pytest.mark.parametrize("epsilon", [1, -1], ids=["eps+", "eps-"])
@pytest.mark.parametrize("check_id", CATALOG)
def test_check_passes_in_dimension_two(service, check_id, epsilon):
    hermiticity = "anti_hermitian" if epsilon == 1 else "hermitian"
    config = ScenarioConfig(**scenario_dict(epsilon=epsilon, samples=2, hermiticity=hermiticity))
    result = service.run(config, [check_id]).results[0]
    assert result.status in (CheckStatus.PASSED, CheckStatus.SKIPPED), result.message or result.residual


def test_stm_projectors_skip_without_majorana(service):
    config = ScenarioConfig(**scenario_dict(p=4, q=0, band=0))
    result = service.run(config, ["modules.stm_projectors"]).results[0]
    assert result.status == CheckStatus.SKIPPED


def test_shipped_dimension_two_config(service):
    parsed = ScenarioParser().parse(SCENARIOS / "dimension_two.json")
    assert parsed.success, parsed.errors
    for config in parsed.items:
        assert service.run(config).passed


@pytest.mark.slow
def test_default_configs_pass(service):
    for name in ("default.json", "signatures.json"):
        parsed = ScenarioParser().parse(SCENARIOS / name)
        assert parsed.success, parsed.errors
        for config in parsed.items:
            report = service.run(config)
            failed = [r.check_id for r in report.results if not r.ok]
            assert not failed, f"{config.name}: {failed}"


@pytest.mark.slow
@pytest.mark.parametrize("check_id", ["lagrangians.stm_identity", "lagrangians.pi_identity", "lagrangians.dym_pairing"])
def test_dym_checks_in_dimension_four_with_band_one(service, check_id):
    twist = {"v_r": 1, "v_l": 0, "e_r": 1, "e_l": 0}
    config = ScenarioConfig(**scenario_dict(p=3, q=1, band=1, twist=twist))
    result = service.run(config, [check_id]).results[0]
    assert result.status == CheckStatus.PASSED, result.message or result.details


def test_equations_solve_the_coupled_dym_wave(service):
    config = ScenarioConfig(**scenario_dict(samples=2))
    result = service.run(config, ["operators.equations"]).results[0]
    assert result.status == CheckStatus.PASSED, result.message or result.details
    assert result.details["dym_kernel_dim"] > 0
    assert result.details["dym_operator_residual"] < 1e-9
    assert result.details["flipped_majorana_residual"] > 1e-3
