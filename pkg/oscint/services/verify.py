from __future__ import annotations

"""Run the coefficient checks over registered methods and compare against their stated orders."""

from ..activity import ActivityEvent, log_activity
from ..methodRegistry import get_method_entry, method_ids
from ..schemas import PhaseLagSummary, VerificationResult
from .analysis import verify_method

SUM_TOLERANCE = 1e-13
PHASE_LAG_ORDER_TOLERANCE = 0.1
FITTED_IDENTITY_LIMIT = 1e-11


def verify_registered(selected: list[str] | None = None) -> list[VerificationResult]:
    reports: list[VerificationResult] = []
    for method_id in selected or method_ids():
        entry = get_method_entry(method_id)
        method = entry.factory()
        outcome = verify_method(method)
        failures: list[str] = []
        if abs(outcome.a_sum) > SUM_TOLERANCE:
            failures.append(f"sum of a is {outcome.a_sum:.3e}, expected 0")
        # Second-order consistency: b0 + 2(b1 + ... + bk) equals sum of j**2 * a_j over j >= 1.
        expected_b_sum = float(sum(j * j * a for j, a in enumerate(method.a)))
        if abs(outcome.b_sum - expected_b_sum) > SUM_TOLERANCE * expected_b_sum:
            failures.append(f"sum of b is {outcome.b_sum!r}, expected {expected_b_sum}")
        if outcome.algebraic_order != entry.expected_algebraic_order:
            failures.append(
                f"algebraic order {outcome.algebraic_order}, expected {entry.expected_algebraic_order}"
            )
        if entry.expected_phase_lag_order is None:
            if not outcome.phase_lag_infinite:
                failures.append("phase lag does not vanish identically")
            if outcome.fitted_identity_max is not None and outcome.fitted_identity_max > FITTED_IDENTITY_LIMIT:
                failures.append(f"fitted identity residual {outcome.fitted_identity_max:.3e}")
        elif outcome.phase_lag is None:
            failures.append(f"phase lag vanishes, expected order {entry.expected_phase_lag_order}")
        elif abs(outcome.phase_lag.order_estimate - entry.expected_phase_lag_order) > PHASE_LAG_ORDER_TOLERANCE:
            failures.append(
                f"phase-lag order {outcome.phase_lag.order_estimate:.3f}, "
                f"expected {entry.expected_phase_lag_order}"
            )
        summary = None
        if outcome.phase_lag is not None:
            summary = PhaseLagSummary(
                order_estimate=outcome.phase_lag.order_estimate,
                constant_estimate=outcome.phase_lag.constant_estimate,
                fit_residual=outcome.phase_lag.fit_residual,
            )
        reports.append(
            VerificationResult(
                method_id=method_id,
                a_sum=outcome.a_sum,
                b_sum=outcome.b_sum,
                algebraic_order=outcome.algebraic_order,
                expected_algebraic_order=entry.expected_algebraic_order,
                phase_lag=summary,
                phase_lag_infinite=outcome.phase_lag_infinite,
                expected_phase_lag_order=entry.expected_phase_lag_order,
                fitted_identity_max=outcome.fitted_identity_max,
                periodicity_bound=outcome.periodicity_bound,
                passed=not failures,
                failures=failures,
            )
        )
    failed = [report.method_id for report in reports if not report.passed]
    log_activity(
        ActivityEvent.VERIFY_COMPLETED,
        f"{len(reports) - len(failed)} of {len(reports)} methods verified",
        status="success" if not failed else "failed",
        metadata={"failed": failed},
        source="verify_registered",
    )
    return reports
