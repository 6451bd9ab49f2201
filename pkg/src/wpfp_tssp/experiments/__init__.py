from .convergence import check_report, convergence_study, fitted_orders, subsample, write_report
from .steady import check_verdict, steady_state_run, write_verdict
from .type import ConvergenceReport, SteadyVerdict

__all__ = [
    "ConvergenceReport",
    "SteadyVerdict",
    "check_report",
    "check_verdict",
    "convergence_study",
    "fitted_orders",
    "steady_state_run",
    "subsample",
    "write_report",
    "write_verdict",
]
