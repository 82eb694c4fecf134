"""Size and work regression budgets.

Each budget is C * (leading term) * polylog(n) with log = log2.  The
constants are fixed here; the test suite fails when a run exceeds them.
"""
import math

from .shortcut import DEFAULT_OMEGA

SIZE_C = 4
# pruning work: TC-pruning against n * rho^(2w-2) * log^2 n,
# truncated searches against n * rho^4 * log^3 n.  Each constant is at least
# 4x the largest ratio seen on spined n=256, m=4096 graphs (rho in 1, 2, 4).
TC_WORK_C = 1
TRUNC_WORK_C = 128


def _log(n):
    return math.log2(max(n, 2))


def shortcut_size_budget(n, rho):
    return SIZE_C * n * rho ** 2 * _log(n) ** 2


def hopset_size_budget(n, rho, eps):
    eps = float(eps)
    return SIZE_C * (n / eps ** 2 + n * rho ** 2) * _log(n) ** 2


def tc_work_budget(n, rho, omega=DEFAULT_OMEGA):
    return TC_WORK_C * n * rho ** (2 * omega - 2) * _log(n) ** 2


def trunc_work_budget(n, rho):
    return TRUNC_WORK_C * n * rho ** 4 * _log(n) ** 3
