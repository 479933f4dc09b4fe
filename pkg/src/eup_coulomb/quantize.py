"""
Direct numerical solution of the quantization conditions.

Both equations reduce to one condition in x = E/mc² through the pair
(p0, d): Klein-Gordon uses p0 = δ² + 3/4 and d = δ, Dirac uses p0 = γ² and
d = γ − 1/2. With K = n + d + 1/2, P = p0 + (1 − x²)/η and β = Zμx/√η the
de Sitter conditions are

    K = (√(P + 2β) − √(P − 2β)) / 2     regular (decaying) exponent
    K = (√(P + 2β) + √(P − 2β)) / 2     irregular exponent

and in anti-de Sitter the two radicands become complex conjugates,

    K = Re √(P' + 2iβ),   P' = p0 + (x² − 1)/η.

Roots are bracketed analytically and refined with scipy's brentq.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from src.eup_coulomb.exceptions import (
    InvalidParameterError,
    NoRootError,
    OutOfDomainError,
)
from src.eup_coulomb.models import (
    EnergyResult,
    ExponentBranch,
    SpaceKind,
    Validity,
)

logger = logging.getLogger(__name__)

XTOL = 1e-15
EPS = float(np.finfo(float).eps)
RTOL = 4.0 * EPS
MAX_ITERATIONS = 200


class EquationKind(Enum):
    KG = "kg"
    DIRAC = "dirac"


@dataclass(frozen=True)
class QuantizationProblem:
    kind: EquationKind
    exponent_sq: float
    z_mu: float
    eta: float
    n: int
    space: SpaceKind

    def __post_init__(self) -> None:
        if self.exponent_sq <= 0.0:
            raise InvalidParameterError(
                f"exponent^2 must be > 0 (got {self.exponent_sq})"
            )
        if self.eta <= 0.0:
            raise InvalidParameterError(
                "eta must be > 0: the condition is undefined without deformation, "
                "use the closed forms instead"
            )
        if self.n < 0:
            raise InvalidParameterError(f"n must be >= 0 (got {self.n})")
        if self.z_mu < 0.0:
            raise InvalidParameterError(f"Zmu must be >= 0 (got {self.z_mu})")

    @classmethod
    def from_kg(cls, inputs: Any) -> "QuantizationProblem":
        """Build from KGSpectrumInputs."""
        return cls(
            kind=EquationKind.KG,
            exponent_sq=inputs.delta_sq,
            z_mu=inputs.z_mu,
            eta=inputs.deformation.eta,
            n=inputs.state.n,
            space=inputs.deformation.space,
        )

    @classmethod
    def from_dirac(cls, inputs: Any) -> "QuantizationProblem":
        """Build from DiracSpectrumInputs."""
        return cls(
            kind=EquationKind.DIRAC,
            exponent_sq=inputs.gamma_sq,
            z_mu=inputs.z_mu,
            eta=inputs.deformation.eta,
            n=inputs.state.n,
            space=inputs.deformation.space,
        )

    @property
    def p0(self) -> float:
        if self.kind is EquationKind.KG:
            return self.exponent_sq + 0.75
        return self.exponent_sq

    @property
    def d(self) -> float:
        root = math.sqrt(self.exponent_sq)
        return root if self.kind is EquationKind.KG else root - 0.5

    @property
    def K(self) -> float:
        return self.n + self.d + 0.5

    @property
    def bracket(self) -> float:
        """B = K² − p0, the quantity multiplying η in the closed forms."""
        return self.K ** 2 - self.p0

    def beta(self, x: float) -> float:
        return self.z_mu * x / math.sqrt(self.eta)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "exponent_sq": self.exponent_sq,
            "z_mu": self.z_mu,
            "eta": self.eta,
            "n": self.n,
            "space": self.space.value,
        }


def _one_minus_sq(x: float) -> float:
    return (1.0 - x) * (1.0 + x)


def closed_form_one_minus_sq(problem: QuantizationProblem) -> float:
    """
    1 − x² at the closed-form level, ((Zμ)² + sηB·K²)/(K² + (Zμ)²).

    Divided by η this stays accurate where 1 − x·x computed from the rounded
    level would lose every digit.
    """
    K_sq = problem.K ** 2
    z_sq = problem.z_mu ** 2
    signed_eta = problem.space.sign * problem.eta
    return (z_sq + signed_eta * problem.bracket * K_sq) / (K_sq + z_sq)


def _radicand_slack(problem: QuantizationProblem, x: float, P: float, two_beta: float) -> float:
    """Rounding error of P ± 2β; (1 − x²)/η alone carries about ε(1 + x²)/η."""
    scale = abs(P) + abs(two_beta) + (1.0 + x * x) / problem.eta + 1.0
    return 64.0 * EPS * scale


def ds_radicands(
    problem: QuantizationProblem, x: float, one_minus_sq: Optional[float] = None
) -> Tuple[float, float]:
    """
    Both dS radicands at x.

    Args:
        problem: Quantization problem on the de Sitter branch
        x: Energy in units of mc²
        one_minus_sq: 1 − x² when known more accurately than from x

    Returns:
        (R₊, R₋) = (P + 2β, P − 2β); negative roundoff is clamped to 0

    Raises:
        OutOfDomainError: If a radicand is negative beyond rounding error
    """
    if one_minus_sq is None:
        one_minus_sq = _one_minus_sq(x)
    P = problem.p0 + one_minus_sq / problem.eta
    two_beta = 2.0 * problem.beta(x)
    r_plus, r_minus = P + two_beta, P - two_beta
    slack = _radicand_slack(problem, x, P, two_beta)
    if r_plus < 0.0 or r_minus < 0.0:
        if min(r_plus, r_minus) < -slack:
            raise OutOfDomainError(
                f"negative radicand at x={x!r}: R+={r_plus:.6e}, R-={r_minus:.6e}"
            )
        r_plus, r_minus = max(r_plus, 0.0), max(r_minus, 0.0)
    return r_plus, r_minus


def ads_radicand(
    problem: QuantizationProblem, x: float, one_minus_sq: Optional[float] = None
) -> complex:
    """P' + 2iβ."""
    if one_minus_sq is None:
        one_minus_sq = _one_minus_sq(x)
    P = problem.p0 - one_minus_sq / problem.eta
    return complex(P, 2.0 * problem.beta(x))


def stable_sqrt_real(z: complex) -> float:
    """Re √z on the principal branch without cancellation for Re z < 0."""
    p, q = z.real, z.imag
    modulus = math.hypot(p, q)
    if p >= 0.0:
        return math.sqrt(0.5 * (modulus + p))
    half = math.sqrt(0.5 * (modulus - p))
    return abs(q) / (2.0 * half) if half > 0.0 else 0.0


def ds_upper_limit(problem: QuantizationProblem) -> float:
    """Energy where R₋ vanishes; the dS conditions are real on [0, x_hi]."""
    a = problem.z_mu * math.sqrt(problem.eta)
    return -a + math.sqrt(a * a + 1.0 + problem.eta * problem.p0)


def ads_upper_limit(problem: QuantizationProblem) -> float:
    return math.sqrt(
        1.0 + problem.eta * (problem.K ** 2 + abs(problem.p0) + 1.0)
    )


def select_branch(problem: QuantizationProblem) -> ExponentBranch:
    """
    dS levels decay only when β > K² at the level; both branches meet at
    x_hi with residual K − √β_hi, whose sign picks the branch.
    """
    if problem.space is SpaceKind.ANTI_DE_SITTER:
        return ExponentBranch.REGULAR
    beta_hi = problem.beta(ds_upper_limit(problem))
    if problem.K - math.sqrt(beta_hi) < 0.0:
        return ExponentBranch.REGULAR
    return ExponentBranch.IRREGULAR


def residual(
    problem: QuantizationProblem,
    E_over_mc2: float,
    branch: Optional[ExponentBranch] = None,
) -> float:
    """
    Condition written as K − (radical combination); zero at an eigenvalue.

    Args:
        problem: Quantization problem
        E_over_mc2: Trial energy x
        branch: dS exponent branch; chosen by `select_branch` when omitted

    Returns:
        Residual; monotonic in x with one sign change on the admissible interval
    """
    x = float(E_over_mc2)
    if problem.space is SpaceKind.ANTI_DE_SITTER:
        return problem.K - stable_sqrt_real(ads_radicand(problem, x))

    if branch is None:
        branch = select_branch(problem)
    r_plus, r_minus = ds_radicands(problem, x)
    root_sum = math.sqrt(r_plus) + math.sqrt(r_minus)
    if branch is ExponentBranch.IRREGULAR:
        return problem.K - 0.5 * root_sum
    if root_sum == 0.0:
        return problem.K
    # (√R₊ − √R₋)/2 = 2β/(√R₊ + √R₋)
    return problem.K - 2.0 * problem.beta(x) / root_sum


def admissible_interval(problem: QuantizationProblem) -> Tuple[float, float]:
    if problem.space is SpaceKind.DE_SITTER:
        return 0.0, ds_upper_limit(problem)
    return 0.0, ads_upper_limit(problem)


def solve(problem: QuantizationProblem) -> EnergyResult:
    """
    Root of the condition on the admissible interval, as E/mc².

    Args:
        problem: Quantization problem with eta > 0

    Returns:
        EnergyResult carrying the root and the exponent branch it sits on

    Raises:
        NoRootError: If the residual keeps one sign on the interval
        OutOfDomainError: If a radicand turns negative inside the interval
    """
    branch = select_branch(problem)
    x_lo, x_hi = admissible_interval(problem)
    f_lo = residual(problem, x_lo, branch)
    f_hi = residual(problem, x_hi, branch)
    logger.debug(
        f"solve {problem.kind.value} n={problem.n} {problem.space.value} "
        f"{branch.value}: f({x_lo})={f_lo:.3e}, f({x_hi:.15g})={f_hi:.3e}"
    )

    if f_lo == 0.0:
        root = x_lo
    elif f_hi == 0.0:
        root = x_hi
    elif np.sign(f_lo) == np.sign(f_hi):
        raise NoRootError(
            f"no sign change on [{x_lo}, {x_hi}] for {problem.kind.value} "
            f"n={problem.n}, eta={problem.eta}: no bound state"
        )
    else:
        root = brentq(
            lambda x: residual(problem, x, branch),
            x_lo,
            x_hi,
            xtol=XTOL,
            rtol=RTOL,
            maxiter=MAX_ITERATIONS,
        )
    if branch is ExponentBranch.IRREGULAR:
        logger.info(
            f"{problem.kind.value} n={problem.n} at eta={problem.eta}: "
            f"level sits on the non-normalizable exponent"
        )
    return EnergyResult(
        value=float(root),
        validity=Validity.OK,
        branch=problem.space,
        exponent=branch,
    )
