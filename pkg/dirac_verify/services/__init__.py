"""
Services Layer

Verification logic of the application.
Check suites wrap the core algebra into seeded, tolerance-aware checks; the
run service schedules them and assembles reports.

Benefits:
- Testability: Suites can be unit tested without the CLI
- Reusability: Same checks run from the CLI, scenario files or tests
- Maintainability: New identities are new check methods, nothing else changes
- Separation of Concerns: Numerics live in core, scheduling and status here
"""

from dirac_verify.services.check_registry import (
    CheckContext,
    CheckOutcome,
    CheckRegistry,
    CheckSpec,
    get_check_registry,
)
from dirac_verify.services.clifford_checks import CliffordChecksService, get_clifford_checks_service
from dirac_verify.services.operator_checks import OperatorChecksService, get_operator_checks_service
from dirac_verify.services.pauli_checks import PauliChecksService, get_pauli_checks_service
from dirac_verify.services.lagrangian_checks import LagrangianChecksService, get_lagrangian_checks_service
from dirac_verify.services.run_service import RunService, get_run_service

__all__ = [
    # Service classes
    'CheckRegistry',
    'CliffordChecksService',
    'OperatorChecksService',
    'PauliChecksService',
    'LagrangianChecksService',
    'RunService',
    # Check plumbing
    'CheckContext',
    'CheckOutcome',
    'CheckSpec',
    # Dependency injection helpers
    'get_check_registry',
    'get_clifford_checks_service',
    'get_operator_checks_service',
    'get_pauli_checks_service',
    'get_lagrangian_checks_service',
    'get_run_service',
]
