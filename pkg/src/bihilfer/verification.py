"""Independent evidence that the constructed series solve the equation.

Three checks of increasing machinery:

* ``residual_coefficient_identity`` balances every series term through the
  closed-form monomial operator against the coefficient recurrence -- the
  same Gamma-ratio product computed two structurally different ways;
* ``residual_numeric`` feeds sampled series values through the numeric
  operator composition and compares against the right-hand side pointwise;
* ``initial_condition_check`` recovers the Cauchy data as y -> 0+ limits of
  termwise-differentiated series, extrapolated by a three-point Richardson
  (Aitken) step.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fractional_ops import (
    SampledFunction,
    falling_product,
    hilfer_monomial,
    hilfer_numeric,
)
from .solver import (
    CauchySolution,
    DegenerateProblem,
    cauchy_solution,
    coefficient_sequence,
    derive_params,
    fundamental_solution,
)
from .special_functions import DEFAULT_TOL

__all__ = [
    "ResidualReport",
    "residual_coefficient_identity",
    "residual_numeric",
    "initial_condition_check",
    "ic_derivative_sequence",
]

# Relative errors use max(|rhs|, REL_FLOOR) to avoid blowups near zeros of u.
REL_FLOOR = 1e-30

# Deep geometric tail: the slowest error exponent in the y->0 limits can be
# as small as 0.1, so the extrapolation needs y^0.1 itself to become small.
DEFAULT_IC_POINTS = tuple(1e-4 * 1e-4**n for n in range(10))


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """Pointwise comparison of D^{(alpha,beta)mu} u against lambda y^m u.

    Errors are taken over the comparison window only; grid points whose
    derivative stencils are one-sided (two at each end of the full grid)
    are excluded, and `excluded_boundary_points` counts how many of those
    fell inside the window. `tail_start` records how many leading series
    terms were shifted out of the numeric path (see residual_numeric).
    """

    grid: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    max_abs_error: float
    max_rel_error: float
    excluded_boundary_points: int
    tail_start: int
    converged: bool


def residual_coefficient_identity(
    problem: DegenerateProblem,
    s: int,
    K: int,
    coeffs: "list[float] | None" = None,
) -> float:
    """Maximum relative error of the term balance over k = 1..K.

    Applying the closed-form operator to the k-th series monomial must
    reproduce lambda times the (k-1)-th coefficient:
    coef(D y^{ak+b_s}) * c_k = lambda * c_{k-1} after weighting by lambda^k;
    the lambda powers cancel in the relative error, which is what is
    computed. The k = 0 term must map to exactly zero (kernel monomial).

    `coeffs` overrides the recurrence output; the verify CLI uses it as a
    corruption hook for negative controls.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got K={K}")
    params = derive_params(problem)
    a, bs = params.a, params.b[s]
    if coeffs is None:
        coeffs = coefficient_sequence(problem, s, K)
    elif len(coeffs) < K + 1:
        raise ValueError(f"need K+1={K + 1} coefficients, got {len(coeffs)}")
    kernel = hilfer_monomial(problem.orders, bs)
    if kernel.coef != 0:
        raise DomainError(
            f"branch leading monomial y^{bs} not annihilated (coef {kernel.coef})"
        )
    if problem.lam == 0:
        return 0.0
    worst = 0.0
    tiny = sys.float_info.min
    for k in range(1, K + 1):
        if coeffs[k - 1] < tiny or coeffs[k] < tiny:
            break  # subnormal coefficients no longer carry relative precision
        term = hilfer_monomial(problem.orders, a * k + bs)
        err = abs(term.coef * coeffs[k] - coeffs[k - 1]) / abs(coeffs[k - 1])
        worst = max(worst, err)
    return worst


def _default_tail_start(problem: DegenerateProblem, s: int) -> int:
    """Shift the numeric residual to the series tail whose inner integral
    has exponent at least i + 3/4, so the grid derivative meets no
    singularity worse than its own accuracy order."""
    params = derive_params(problem)
    orders = problem.orders
    k1 = 0
    while params.a * k1 + params.b[s] + orders.inner_order - orders.i < 0.75:
        k1 += 1
    return k1


def residual_numeric(
    problem: DegenerateProblem,
    s: int,
    y_max: float = 1.0,
    n_points: int = 2048,
    tol: float = DEFAULT_TOL,
    tail_start: "int | None" = None,
) -> ResidualReport:
    """Compare the numeric operator against lambda y^m u on [y_max/4, y_max].

    The check exploits that the series tail obeys an exact shifted equation:
    with w_k(y) = sum_{j >= k} c_j lambda^j y^{aj+b}, termwise application of
    the monomial formula gives D w_{k} = lambda y^m w_{k-1} (and D w_0 =
    lambda y^m w_0, the original equation). Verifying the tail equation for
    `tail_start` = k avoids sampling the near-origin singular head, whose
    unbounded derivatives would otherwise drown the quadrature in scheme
    error; k = 0 is the plain equation. The default picks the smallest k
    that makes the composed scheme's accuracy order reach ~2.
    """
    orders = problem.orders
    if orders.i > 2:
        raise DomainError(f"numeric residual supports i <= 2, got i={orders.i}")
    if n_points < 8:
        raise ValueError("n_points too small")
    k1 = _default_tail_start(problem, s) if tail_start is None else tail_start
    if k1 < 0:
        raise ValueError("tail_start must be >= 0")
    sol = fundamental_solution(problem, s)
    h = y_max / n_points
    ys = h * np.arange(n_points + 1)
    converged = True
    w_lhs = np.empty(ys.size, dtype=complex)
    w_rhs = np.empty(ys.size, dtype=complex)
    for n, y in enumerate(ys[1:], start=1):
        rep_l = sol.evaluate_tail_report(y, k1, tol)
        rep_r = sol.evaluate_tail_report(y, max(k1 - 1, 0), tol)
        w_lhs[n] = rep_l.value
        w_rhs[n] = rep_r.value
        converged = converged and rep_l.converged and rep_r.converged
    w_lhs[0] = sol.evaluate_tail_report(0.0, k1, tol).value
    lhs = hilfer_numeric(SampledFunction(0.0, h, w_lhs), orders).values
    rhs = problem.lam * ys**problem.m * w_rhs
    # At the origin the m-power absorbs any singular head of the rhs tail:
    # m + a*(k1-1) + b > 0 holds whenever the default shift puts the full
    # series on the rhs, so the product has a plain limit there.
    k0 = max(k1 - 1, 0)
    lead_rhs = problem.m + sol.a * k0 + sol.b
    if lead_rhs > 0.0 or problem.lam == 0:
        rhs[0] = 0.0
    elif lead_rhs == 0.0:
        rhs[0] = problem.lam ** (k0 + 1) * sol.coefficient(k0)
    else:
        raise DomainError(
            f"residual undefined at y=0: m + a*k0 + b = {lead_rhs} < 0"
        )
    window = ys >= y_max / 4.0
    stencil_edges = np.zeros(ys.size, dtype=bool)
    stencil_edges[:2] = True
    stencil_edges[-2:] = True
    excluded = int(np.count_nonzero(window & stencil_edges))
    compare = window & ~stencil_edges
    abs_err = np.abs(lhs[compare] - rhs[compare])
    rel_err = abs_err / np.maximum(np.abs(rhs[compare]), REL_FLOOR)
    return ResidualReport(
        grid=ys,
        lhs=lhs,
        rhs=rhs,
        max_abs_error=float(abs_err.max()),
        max_rel_error=float(rel_err.max()),
        excluded_boundary_points=excluded,
        tail_start=k1,
        converged=converged,
    )


def _series_derivative_at(
    sol_branches: CauchySolution, j: int, y: float, tol: float
) -> complex:
    """d^j/dy^j of g(y) = y^{-(1-mu)(i-beta)} u(y), termwise.

    The exponent shift turns branch s into sum_k c_k lambda^k y^{ak+s}, so
    every derivative is again a generalized power series with nonnegative
    exponents (falling products kill the s < j heads exactly)."""
    total = 0.0 + 0.0j
    for weight, branch in zip(sol_branches.weights, sol_branches.branches):
        if weight == 0:
            continue
        a = branch.a
        s = branch.s
        lam = branch.lam
        partial = 0.0 + 0.0j
        k = 0
        small_streak = 0
        while True:
            fp = falling_product(a * k + s, j) if j > 0 else 1.0
            exponent = a * k + s - j
            if fp == 0.0:
                term = 0.0 + 0.0j  # annihilated head term; never form y**exponent
            else:
                term = (
                    branch.coefficient(k)
                    * lam**k
                    * fp
                    * (y**exponent if exponent != 0.0 else 1.0)
                )
            partial += term
            if abs(term) <= tol * max(1.0, abs(partial)):
                small_streak += 1
                if small_streak >= 3:
                    break
            else:
                small_streak = 0
            k += 1
            if k > 10_000:
                break
        total += weight * partial
    return total


def _aitken(g0: complex, g1: complex, g2: complex) -> complex:
    """Three-point Richardson step for geometrically spaced samples."""
    denom = (g2 - g1) - (g1 - g0)
    if abs(denom) <= 1e-14 * max(abs(g0), abs(g1), abs(g2), 1e-300):
        return g2
    return g2 - (g2 - g1) ** 2 / denom


def ic_derivative_sequence(
    problem: DegenerateProblem,
    phis: "list[complex] | tuple[complex, ...]",
    j: int,
    y_points: "tuple[float, ...] | None" = None,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Values of d^j/dy^j (y^{-(1-mu)(i-beta)} u)(y) along y_points."""
    if y_points is None:
        y_points = DEFAULT_IC_POINTS
    sol = cauchy_solution(problem, phis)
    return np.array([_series_derivative_at(sol, j, y, tol) for y in y_points])


def initial_condition_check(
    problem: DegenerateProblem,
    phis: "list[complex] | tuple[complex, ...]",
    y_points: "tuple[float, ...] | None" = None,
    tol: float = DEFAULT_TOL,
) -> list[float]:
    """|extrapolated limit - phi_j| for j = 0..i-1.

    The weighted series g(y) = y^{-(1-mu)(i-beta)} u(y) is differentiated
    termwise (exact), sampled along the decreasing y_points and driven to
    y -> 0+ by a Richardson step on the last three points."""
    if y_points is None:
        y_points = DEFAULT_IC_POINTS
    if len(y_points) < 3:
        raise ValueError("need at least 3 extrapolation points")
    if not all(y_points[n] > y_points[n + 1] > 0.0 for n in range(len(y_points) - 1)):
        raise ValueError("y_points must decrease strictly toward 0")
    errors = []
    for j in range(problem.orders.i):
        values = ic_derivative_sequence(problem, phis, j, y_points, tol)
        limit = _aitken(values[-3], values[-2], values[-1])
        errors.append(abs(limit - complex(phis[j])))
    return errors
