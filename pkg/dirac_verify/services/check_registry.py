"""
Check Registry

Catalog of every verification check, addressed by dotted id (suite.name).

Handles check lookup following SOLID principles:
- Single Responsibility: Only maps ids to check callables and resolves selections
- Open/Closed: Suites register their checks without touching the runner
"""
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from typing import Any, Callable, Dict, Iterable, List, Optional
import logging

import numpy as np

from dirac_verify.core.graded_modules import (
    ModuleDescriptor,
    STMModule,
    TwistData,
    build_stm_module,
    build_twisted_module,
)
from dirac_verify.core.sampling import check_rng
from dirac_verify.models import RealBranch, ScenarioConfig, Signature

logger = logging.getLogger(__name__)


@dataclass
class CheckOutcome:
    """Raw result of a check body before status assignment"""
    residual: float
    tolerance: float
    details: Dict[str, Any] = field(default_factory=dict)
    skipped: bool = False
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.skipped or bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    @classmethod
    def skip(cls, message: str, **details) -> "CheckOutcome":
        return cls(residual=0.0, tolerance=0.0, details=details, skipped=True, message=message)


class CheckContext:
    """Scenario view handed to a check: seeded generator, budgets, tolerances and module builders"""

    def __init__(self, config: ScenarioConfig, check_id: str):
        self.config = config
        self.check_id = check_id
        self.rng = check_rng(config.seed, check_id)

    @property
    def sig(self) -> Signature:
        return self.config.signature

    @property
    def band(self) -> int:
        return self.config.band

    @property
    def capacity(self) -> int:
        return self.config.effective_capacity

    @property
    def heavy_axes(self) -> int:
        """
        Coordinates the random data of neutrino/charged-module checks depends on.

        Above n = 2 the fibers of E and P are 2^(n+2) (v+e) wide, so the data
        varies along x_0 only and keeps the full band there.
        """
        return self.sig.n if self.sig.n <= 2 else 1

    def tolerance(self, default: float) -> float:
        return float(self.config.tolerances.get(self.check_id, default))

    def samples(self, default: int) -> int:
        return self.config.samples if self.config.samples is not None else default

    def twisted(self, w: Optional[int] = None, graded: bool = True,
                branch: Optional[RealBranch] = None) -> ModuleDescriptor:
        """
        Twisted Grassmann module for operator checks.

        The default twist is C^2 graded by diag(1, -1) in dimension two and C^1 above.
        """
        if w is None:
            w = 2 if self.sig.n <= 2 else 1
        tau = np.diag([1.0, -1.0] * (w // 2) + [1.0] * (w % 2)) if graded else None
        return build_twisted_module(self.sig, TwistData(w=w, tau=tau), branch or self.config.branch)

    def stm(self) -> STMModule:
        return build_stm_module(self.sig, self.config.twist)


CheckFunc = Callable[[CheckContext], CheckOutcome]


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    description: str
    func: CheckFunc

    @property
    def suite(self) -> str:
        return self.check_id.split(".", 1)[0]


class CheckRegistry:
    """Ordered id -> CheckSpec map with wildcard selection"""

    def __init__(self):
        self._checks: Dict[str, CheckSpec] = {}

    def register(self, check_id: str, description: str, func: CheckFunc):
        if check_id in self._checks:
            raise ValueError(f"check '{check_id}' is already registered")
        self._checks[check_id] = CheckSpec(check_id, description, func)

    def register_suite(self, service) -> None:
        """Register every (id, description, func) a suite service declares"""
        for check_id, description, func in service.checks():
            self.register(check_id, description, func)

    def __contains__(self, check_id: str) -> bool:
        return check_id in self._checks

    def __len__(self):
        return len(self._checks)

    def get(self, check_id: str) -> CheckSpec:
        try:
            return self._checks[check_id]
        except KeyError:
            raise KeyError(f"unknown check '{check_id}'") from None

    def all(self) -> List[CheckSpec]:
        return list(self._checks.values())

    def unknown(self, patterns: Iterable[str]) -> List[str]:
        """Patterns that match no registered check"""
        return [p for p in patterns if not any(fnmatchcase(c, p) for c in self._checks)]

    def resolve(self, patterns: Iterable[str]) -> List[CheckSpec]:
        """
        Expand ids and wildcards ("operators.*", "*") in declared order, without duplicates.

        Raises:
            KeyError: for a pattern matching no check
        """
        selected: List[CheckSpec] = []
        seen = set()
        for pattern in patterns:
            matches = [c for c in self._checks if fnmatchcase(c, pattern)]
            if not matches:
                raise KeyError(f"unknown check '{pattern}'")
            for check_id in matches:
                if check_id not in seen:
                    seen.add(check_id)
                    selected.append(self._checks[check_id])
        return selected


_registry: Optional[CheckRegistry] = None


def get_check_registry() -> CheckRegistry:
    """Dependency injection helper: registry with every suite registered"""
    global _registry
    if _registry is None:
        # Suites import this module for CheckContext/CheckOutcome
        from dirac_verify.services.clifford_checks import get_clifford_checks_service
        from dirac_verify.services.operator_checks import get_operator_checks_service
        from dirac_verify.services.pauli_checks import get_pauli_checks_service
        from dirac_verify.services.lagrangian_checks import get_lagrangian_checks_service

        registry = CheckRegistry()
        for service in (
            get_clifford_checks_service(),
            get_operator_checks_service(),
            get_pauli_checks_service(),
            get_lagrangian_checks_service(),
        ):
            registry.register_suite(service)
        logger.debug("registered %d checks", len(registry))
        _registry = registry
    return _registry
