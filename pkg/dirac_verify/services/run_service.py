"""
Run Service Layer

Executes a scenario's checks and collects a RunReport following SOLID principles:
- Single Responsibility: Only schedules checks and assigns statuses
- Dependency Inversion: Depends on the CheckRegistry abstraction, not on suites
- Open/Closed: New suites need no change here
"""
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional
import logging
import time

import numpy as np

from dirac_verify.config import settings
from dirac_verify.core.fourier_fields import CapacityExceeded
from dirac_verify.models import CheckResult, CheckStatus, RunReport, ScenarioConfig
from dirac_verify.services.check_registry import CheckContext, CheckRegistry, CheckSpec, get_check_registry

logger = logging.getLogger(__name__)


def _json_ready(value):
    """Convert numpy scalars and complex values inside check details"""
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, np.ndarray):
        return _json_ready(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(np.real(value)), float(np.imag(value))]
    if isinstance(value, np.generic):
        return value.item()
    return value


class RunService:
    """Service class for executing verification scenarios"""

    def __init__(self, registry: CheckRegistry, threads: Optional[int] = None):
        """Initialize service with a check registry"""
        self.registry = registry
        self.threads = threads or settings.threads

    def run_check(self, config: ScenarioConfig, spec: CheckSpec) -> CheckResult:
        """
        Run one check and map its outcome to a status.

        A CapacityExceeded diagnostic fails the check; any other exception is
        reported as an error. Nothing propagates.
        """
        start = time.perf_counter()
        try:
            outcome = spec.func(CheckContext(config, spec.check_id))
        except CapacityExceeded as e:
            logger.warning("%s: band capacity exceeded: %s", spec.check_id, e)
            return CheckResult(check_id=spec.check_id, status=CheckStatus.FAILED,
                               wall_time=time.perf_counter() - start,
                               message=f"capacity exceeded: {e}")
        except Exception as e:
            logger.exception("%s raised %s", spec.check_id, type(e).__name__)
            return CheckResult(check_id=spec.check_id, status=CheckStatus.ERROR,
                               wall_time=time.perf_counter() - start,
                               message=f"{type(e).__name__}: {e}")
        elapsed = time.perf_counter() - start

        if outcome.skipped:
            status = CheckStatus.SKIPPED
        elif outcome.passed:
            status = CheckStatus.PASSED
        else:
            status = CheckStatus.FAILED
        residual = float(outcome.residual) if np.isfinite(outcome.residual) else None
        result = CheckResult(
            check_id=spec.check_id,
            status=status,
            residual=None if outcome.skipped else residual,
            tolerance=None if outcome.skipped else outcome.tolerance,
            wall_time=elapsed,
            message=outcome.message,
            details=_json_ready(outcome.details),
        )
        logger.info("%-36s %-8s residual=%s (%.2fs)", spec.check_id, status.value,
                    "-" if result.residual is None else f"{result.residual:.3e}", elapsed)
        return result

    def run(self, config: ScenarioConfig, checks: Optional[List[str]] = None) -> RunReport:
        """
        Run the selected checks (config.checks when not given) in declared order.

        Raises:
            KeyError: for a check id or pattern that matches nothing
        """
        specs = self.registry.resolve(checks if checks is not None else config.checks)
        logger.info("scenario %s %s: %d checks, seed %d, %d threads",
                    config.name, config.signature.label, len(specs), config.seed, self.threads)
        if self.threads > 1 and len(specs) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(lambda spec: self.run_check(config, spec), specs))
        else:
            results = [self.run_check(config, spec) for spec in specs]
        return RunReport(
            scenario=config.name,
            signature=config.signature.label,
            seed=config.seed,
            threads=self.threads,
            results=results,
        )


def get_run_service(threads: Optional[int] = None) -> RunService:
    """Dependency injection helper"""
    return RunService(get_check_registry(), threads)
