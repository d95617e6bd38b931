"""Series solutions of the degenerate equation D^{(alpha,beta)mu} u = lambda y^m u.

Builds the fundamental family u_s(y) = y^{b_s} * sum_k c_k (lambda y^a)^k for
s = 0..i-1 and the solution of the Cauchy-type initial problem as a weighted
combination of branches. The coefficients follow the one-step Gamma-ratio
recurrence; term by term they coincide with the Kilbas-Saigo coefficients at
parameters (gamma, a/gamma, (a+b_s)/gamma - 1), which is verified by the test
suite rather than assumed.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fractional_ops import OrderTriple
from .special_functions import (
    DEFAULT_N_MAX,
    DEFAULT_TOL,
    KilbasSaigoParams,
    SeriesEvalReport,
    _log_gamma_ratio_offset,
    _sum_series,
)

__all__ = [
    "DegenerateProblem",
    "DerivedParams",
    "SeriesSolution",
    "CauchySolution",
    "derive_params",
    "coefficient_sequence",
    "fundamental_solution",
    "cauchy_solution",
    "hilfer_reduction_params",
]

DEFAULT_TRUNCATION = 256


@dataclass(frozen=True)
class DegenerateProblem:
    """Problem data: operator orders, degeneracy exponent m >= 0 and the
    spectral parameter lambda (complex). Solvability additionally requires
    m + mu*(alpha - beta) >= 0."""

    orders: OrderTriple
    m: float
    lam: complex

    def __post_init__(self) -> None:
        if not self.m >= 0.0:
            raise DomainError(f"m >= 0 violated (m={self.m})")
        shift = self.m + self.orders.mu * (self.orders.alpha - self.orders.beta)
        if not shift >= 0.0:
            raise DomainError(
                f"m + mu*(alpha-beta) >= 0 violated "
                f"(value {shift} for m={self.m}, mu={self.orders.mu}, "
                f"alpha={self.orders.alpha}, beta={self.orders.beta})"
            )
        object.__setattr__(self, "lam", complex(self.lam))


@dataclass(frozen=True)
class DerivedParams:
    """Quantities the series construction derives from a problem:
    gamma = beta + mu*(alpha-beta), exponent step a = m + gamma, and the
    branch leading exponents b_s = s - (1-mu)*(i-beta), s = 0..i-1."""

    gamma: float
    a: float
    b: tuple[float, ...]


def derive_params(problem: DegenerateProblem) -> DerivedParams:
    orders = problem.orders
    gamma = orders.gamma
    a = problem.m + gamma
    b = tuple(s - orders.inner_order for s in range(orders.i))
    # Guaranteed by the problem invariants; checked to fail loudly if not.
    if not a > 0.0:
        raise DomainError(f"a = m + gamma > 0 violated (a={a})")
    for bs in b:
        if not problem.m + bs + 1.0 > 0.0:
            raise DomainError(f"m + b_s + 1 > 0 violated (b_s={bs}, m={problem.m})")
    return DerivedParams(gamma, a, b)


def _coefficient_extender(problem: DegenerateProblem, s: int):
    """One-step recurrence c_k = c_{k-1} * Gamma(ak+b-gamma+1)/Gamma(ak+b+1)."""
    params = derive_params(problem)
    a, gamma, bs = params.a, params.gamma, params.b[s]

    def extend(coeffs: list[float], upto: int) -> None:
        while len(coeffs) <= upto:
            k = len(coeffs)
            num = a * k + bs - gamma + 1.0
            if not num > 0.0:
                raise DomainError(
                    f"a*k + b_s - gamma + 1 > 0 violated at k={k} (value {num})"
                )
            coeffs.append(coeffs[-1] * math.exp(_log_gamma_ratio_offset(num, gamma)))

    return extend


def coefficient_sequence(problem: DegenerateProblem, s: int, K: int) -> list[float]:
    """Coefficients c_0..c_K of branch s; c_0 = 1. All Gamma arguments stay
    strictly positive for admissible problems."""
    if not 0 <= s <= problem.orders.i - 1:
        raise ValueError(f"branch s must lie in 0..{problem.orders.i - 1}, got s={s}")
    if K < 0:
        raise ValueError(f"K must be >= 0, got K={K}")
    coeffs = [1.0]
    _coefficient_extender(problem, s)(coeffs, K)
    return coeffs


@dataclass(eq=False)
class SeriesSolution:
    """One fundamental branch u_s(y) = y^b * sum_k c_k (lambda y^a)^k, y > 0.

    Immutable in meaning; the stored coefficient list only grows lazily (an
    idempotent, lock-guarded fill) when an evaluation needs more terms than
    were precomputed at construction, so concurrent grid evaluation is safe.
    """

    b: float
    a: float
    lam: complex
    coeffs: list[float] = field(repr=False)
    problem: DegenerateProblem
    s: int
    _lock: threading.Lock = field(
        default_factory=threading.Lock, repr=False, compare=False
    )

    @property
    def K(self) -> int:
        """Index of the last precomputed coefficient."""
        return len(self.coeffs) - 1

    def kilbas_saigo_params(self) -> KilbasSaigoParams:
        """The (alpha, m, l) triple for which the branch series equals
        y^b * E_{alpha,m,l}(lambda y^a)."""
        params = derive_params(self.problem)
        return KilbasSaigoParams(
            alpha=params.gamma,
            m=self.a / params.gamma,
            l=(self.a + self.b) / params.gamma - 1.0,
        )

    def _ensure_coeffs(self, upto: int) -> None:
        if upto > self.K:
            with self._lock:
                if upto > self.K:
                    _coefficient_extender(self.problem, self.s)(self.coeffs, upto)

    def coefficient(self, k: int) -> float:
        """c_k, extending the cached sequence if needed."""
        if k < 0:
            raise ValueError(f"k must be >= 0, got k={k}")
        self._ensure_coeffs(k)
        return self.coeffs[k]

    def evaluate_report(
        self, y: float, tol: float = DEFAULT_TOL, n_max: int = DEFAULT_N_MAX
    ) -> SeriesEvalReport:
        """Value at y > 0 with truncation metadata. Branches with b < 0 are
        singular at the origin, hence the strict y > 0 requirement."""
        if not y > 0.0:
            raise DomainError(f"evaluation requires y > 0, got y={y}")
        z = self.lam * y**self.a
        prefactor = y**self.b
        if z == 0:
            return SeriesEvalReport(prefactor + 0.0j, 1, 0.0, True)
        self._ensure_coeffs(min(n_max, DEFAULT_TRUNCATION))
        zpow = [1.0 + 0.0j]

        def term(k: int) -> complex:
            self._ensure_coeffs(k)
            while len(zpow) <= k:
                zpow.append(zpow[-1] * z)
            return self.coeffs[k] * zpow[k]

        report = _sum_series(term, tol, n_max)
        return SeriesEvalReport(
            prefactor * report.value,
            report.terms_used,
            report.last_term_magnitude,
            report.converged,
        )

    def evaluate(self, y: float, tol: float = DEFAULT_TOL) -> complex:
        return self.evaluate_report(y, tol).value

    def evaluate_grid(
        self, ys: np.ndarray, tol: float = DEFAULT_TOL, n_max: int = DEFAULT_N_MAX
    ) -> np.ndarray:
        """Vectorized evaluation over a grid of positive points. Truncation
        is chosen by applying the stopping rule at the largest |z| on the
        grid; the coefficient terms are monotone in |z|, so the rule then
        holds everywhere on the grid."""
        ys = np.asarray(ys, dtype=float)
        if np.any(ys <= 0.0):
            raise DomainError("evaluation requires y > 0 at every grid point")
        report = self.evaluate_report(float(ys.max()), tol, n_max)
        n_terms = report.terms_used
        ks = np.arange(n_terms)
        z = self.lam * ys**self.a
        terms = np.asarray(self.coeffs[:n_terms]) * z[:, None] ** ks[None, :]
        return ys**self.b * terms.sum(axis=1)

    def evaluate_tail_report(
        self,
        y: float,
        k_start: int,
        tol: float = DEFAULT_TOL,
        n_max: int = DEFAULT_N_MAX,
    ) -> SeriesEvalReport:
        """Series tail sum_{k >= k_start} c_k lambda^k y^{ak+b}, computed in
        factored form (no head/tail cancellation). Defined at y = 0 as well
        whenever a*k_start + b >= 0."""
        lead = self.a * k_start + self.b
        if y == 0.0:
            if lead > 0.0:
                return SeriesEvalReport(0.0 + 0.0j, 1, 0.0, True)
            if lead == 0.0:
                value = self.coefficient(k_start) * self.lam**k_start
                return SeriesEvalReport(value + 0.0j, 1, 0.0, True)
            raise DomainError("tail is singular at y = 0")
        if not y > 0.0:
            raise DomainError(f"evaluation requires y >= 0, got y={y}")
        z = self.lam * y**self.a
        scale = y**lead * self.lam**k_start
        if z == 0:
            return SeriesEvalReport(scale * self.coefficient(k_start), 1, 0.0, True)
        self._ensure_coeffs(min(n_max, DEFAULT_TRUNCATION + k_start))
        zpow = [1.0 + 0.0j]

        def term(j: int) -> complex:
            self._ensure_coeffs(j + k_start)
            while len(zpow) <= j:
                zpow.append(zpow[-1] * z)
            return self.coeffs[j + k_start] * zpow[j]

        report = _sum_series(term, tol, n_max)
        return SeriesEvalReport(
            scale * report.value,
            report.terms_used,
            report.last_term_magnitude,
            report.converged,
        )

    def evaluate_tail(
        self,
        y: float,
        k_start: int,
        tol: float = DEFAULT_TOL,
        n_max: int = DEFAULT_N_MAX,
    ) -> complex:
        return self.evaluate_tail_report(y, k_start, tol, n_max).value


def fundamental_solution(
    problem: DegenerateProblem, s: int, K: int = DEFAULT_TRUNCATION
) -> SeriesSolution:
    """Branch s of the fundamental system, with K coefficients precomputed."""
    params = derive_params(problem)
    coeffs = coefficient_sequence(problem, s, K)
    return SeriesSolution(
        b=params.b[s], a=params.a, lam=problem.lam, coeffs=coeffs, problem=problem, s=s
    )


@dataclass(eq=False)
class CauchySolution:
    """Weighted branch combination sum_s (phi_s / s!) u_s solving the
    Cauchy-type initial problem with data phi_0..phi_{i-1}."""

    problem: DegenerateProblem
    phis: tuple[complex, ...]
    branches: tuple[SeriesSolution, ...]
    weights: tuple[complex, ...]

    def evaluate_report(
        self, y: float, tol: float = DEFAULT_TOL, n_max: int = DEFAULT_N_MAX
    ) -> SeriesEvalReport:
        total = 0.0 + 0.0j
        terms = 0
        last = 0.0
        converged = True
        for w, branch in zip(self.weights, self.branches):
            if w == 0:
                continue
            rep = branch.evaluate_report(y, tol, n_max)
            total += w * rep.value
            terms += rep.terms_used
            last = max(last, abs(w) * rep.last_term_magnitude)
            converged = converged and rep.converged
        return SeriesEvalReport(total, max(terms, 1), last, converged)

    def evaluate(self, y: float, tol: float = DEFAULT_TOL) -> complex:
        return self.evaluate_report(y, tol).value

    def evaluate_grid(
        self, ys: np.ndarray, tol: float = DEFAULT_TOL, n_max: int = DEFAULT_N_MAX
    ) -> np.ndarray:
        ys = np.asarray(ys, dtype=float)
        total = np.zeros(ys.shape, dtype=complex)
        for w, branch in zip(self.weights, self.branches):
            if w == 0:
                continue
            total += w * branch.evaluate_grid(ys, tol, n_max)
        return total


def cauchy_solution(
    problem: DegenerateProblem, phis: "list[complex] | tuple[complex, ...]"
) -> CauchySolution:
    """Solution of the Cauchy-type problem with initial data phi_0..phi_{i-1};
    phis must have exactly i entries."""
    i = problem.orders.i
    if len(phis) != i:
        raise ValueError(f"phis must have exactly i={i} entries, got {len(phis)}")
    phis_c = tuple(complex(p) for p in phis)
    weights = tuple(p / math.factorial(k) for k, p in enumerate(phis_c))
    branches = tuple(fundamental_solution(problem, s) for s in range(i))
    return CauchySolution(problem, phis_c, branches, weights)


def hilfer_reduction_params(problem: DegenerateProblem) -> list[KilbasSaigoParams]:
    """Kilbas-Saigo parameter triples per branch in the alpha = beta case,
    where the operator is the classical Hilfer derivative:
    (alpha, m/alpha + 1, (m + s - (1-mu)*(i-alpha))/alpha)."""
    orders = problem.orders
    if orders.alpha != orders.beta:
        raise DomainError(
            f"alpha = beta required for the Hilfer reduction "
            f"(alpha={orders.alpha}, beta={orders.beta})"
        )
    alpha, m = orders.alpha, problem.m
    out = []
    for s in range(orders.i):
        out.append(
            KilbasSaigoParams(
                alpha=alpha,
                m=m / alpha + 1.0,
                l=(m + s - (1.0 - orders.mu) * (orders.i - alpha)) / alpha,
            )
        )
    return out
