"""
Shooting eigensolver for the deformed radial equations.

Works without the hypergeometric reduction: the radial equation is
integrated numerically and the energy is adjusted until solutions that are
regular at both singular endpoints match. Anti-de Sitter only, where the
problem lives on a finite compact domain.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from src.eup_coulomb.exceptions import (
    DomainError,
    InvalidParameterError,
    NoEigenvalueError,
    StiffFailureError,
)
from src.eup_coulomb.kg import deformed_level
from src.eup_coulomb.models import EnergyResult, SpaceKind, Validity
from src.eup_coulomb.quantize import EquationKind
from src.eup_coulomb.wavefn import count_nodes

logger = logging.getLogger(__name__)

FROBENIUS_OFFSET = 1e-6
DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-14
NODE_SAMPLES = 4000


@dataclass(frozen=True)
class RadialODE:
    """
    Radial equation of one partial wave at a trial energy x = E/mc².

    For KG the unknown is 𝔽 = √r·ψ with the δ²/r² barrier; for Dirac it is
    Ξ = √r·g₂ with the (γ − 1/2)²/r² barrier. `eta` is λ in units of (mc/ħ)².
    """

    kind: EquationKind
    exponent_sq: float
    z_mu: float
    eta: float
    space: SpaceKind
    energy: float = 1.0

    def __post_init__(self) -> None:
        if self.exponent_sq <= 0.0:
            raise InvalidParameterError(
                f"exponent^2 must be > 0 (got {self.exponent_sq})"
            )
        if self.eta < 0.0:
            raise InvalidParameterError(f"eta must be >= 0 (got {self.eta})")

    @classmethod
    def from_kg(cls, inputs: Any) -> "RadialODE":
        return cls(
            kind=EquationKind.KG,
            exponent_sq=inputs.delta_sq,
            z_mu=inputs.z_mu,
            eta=inputs.deformation.eta,
            space=inputs.deformation.space,
        )

    @classmethod
    def from_dirac(cls, inputs: Any) -> "RadialODE":
        return cls(
            kind=EquationKind.DIRAC,
            exponent_sq=inputs.gamma_sq,
            z_mu=inputs.z_mu,
            eta=inputs.deformation.eta,
            space=inputs.deformation.space,
        )

    @property
    def signed_lambda(self) -> float:
        return self.space.sign * self.eta

    @property
    def indicial_exponent_origin(self) -> float:
        """δ for KG, γ − 1/2 for Dirac."""
        root = math.sqrt(self.exponent_sq)
        return root if self.kind is EquationKind.KG else root - 0.5

    @property
    def p0(self) -> float:
        if self.kind is EquationKind.KG:
            return self.exponent_sq + 0.75
        return self.exponent_sq

    @property
    def k(self) -> float:
        """Exponent of u = √r·𝔽 at the origin on the compact coordinate."""
        return self.indicial_exponent_origin + 0.5

    def at_energy(self, energy: float) -> "RadialODE":
        return replace(self, energy=energy)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "exponent_sq": self.exponent_sq,
            "z_mu": self.z_mu,
            "eta": self.eta,
            "space": self.space.value,
            "energy": self.energy,
        }


def coulomb_coefficient(ode: RadialODE, r: float) -> float:
    """2Zμx·√(1 + sλr²)/r."""
    return 2.0 * ode.z_mu * ode.energy * math.sqrt(1.0 + ode.signed_lambda * r * r) / r


def ode_rhs(ode: RadialODE, r: float, state: Any) -> np.ndarray:
    """
    First-order form of the radial equation in r,

        (1 + λr²)(F'' + F'/r − b/r²) + λrF' + Coulomb·F + (x² − 1)F − cλF = 0

    with b = δ²(1 + λr²), c = 1/2 for KG and b = (γ − 1/2)², c = γ² − 1/4 for
    Dirac. AdS flips the sign of λ everywhere.
    """
    lam = ode.signed_lambda
    metric = 1.0 + lam * r * r
    if r <= 0.0 or metric <= 0.0:
        raise DomainError(f"r={r} lies on a singular point of the radial equation")
    F, dF = state[0], state[1]

    if ode.kind is EquationKind.KG:
        barrier = ode.exponent_sq * metric / (r * r)
        shift = 0.5 * lam
    else:
        barrier = (math.sqrt(ode.exponent_sq) - 0.5) ** 2 / (r * r)
        shift = lam * (ode.exponent_sq - 0.25)

    potential = coulomb_coefficient(ode, r) + ode.energy ** 2 - 1.0 - shift - barrier
    d2F = -dF / r - (lam * r * dF + potential * F) / metric
    return np.array([dF, d2F])


# ---------------------------------------------------------------------------
# Shooting on the compact coordinate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShootingResult:
    result: EnergyResult
    matching_residual: float
    nodes: int
    bracket: Tuple[float, float]

    @property
    def value(self) -> Optional[float]:
        return self.result.value

    def to_dict(self) -> Dict[str, Any]:
        data = self.result.to_dict()
        data.update(
            {
                "matching_residual": self.matching_residual,
                "nodes": self.nodes,
                "bracket": list(self.bracket),
            }
        )
        return data


def _liouville_rhs(k: float, beta: float, level: float) -> Any:
    barrier = k * (k - 1.0)

    def rhs(w: float, g: np.ndarray) -> np.ndarray:
        s = math.sin(w)
        return np.array(
            [g[1], (barrier / (s * s) - 2.0 * beta * math.cos(w) / s - level) * g[0]]
        )

    return rhs


def _integrate(
    rhs: Any, start: float, stop: float, g0: np.ndarray, rtol: float, samples: int
) -> Tuple[np.ndarray, np.ndarray]:
    t_eval = np.linspace(start, stop, samples) if samples else None
    sol = solve_ivp(
        rhs,
        (start, stop),
        g0,
        method="DOP853",
        rtol=rtol,
        atol=DEFAULT_ATOL,
        t_eval=t_eval,
    )
    if sol.status != 0:
        raise StiffFailureError(f"integration stalled at w={sol.t[-1]}: {sol.message}")
    return sol.y[:, -1], (sol.y[0] if samples else np.empty(0))


def _matching_point(ode: RadialODE, n: int) -> float:
    K = n + ode.k
    beta = ode.z_mu * ode.energy / math.sqrt(ode.eta)
    return math.atan2(K * K, beta)


def _shoot(
    ode: RadialODE, w_match: float, rtol: float, samples: int = 0
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Normalized Wronskian of the left and right regular solutions at w_match."""
    k = ode.k
    beta = ode.z_mu * ode.energy / math.sqrt(ode.eta)
    level = ode.p0 + (ode.energy ** 2 - 1.0) / ode.eta
    rhs = _liouville_rhs(k, beta, level)
    w0 = FROBENIUS_OFFSET

    # Two-term Frobenius starts, divided by w0^k.
    left0 = np.array([1.0 - (beta / k) * w0, k / w0 - (beta / k) * (k + 1.0)])
    right0 = np.array([1.0 + (beta / k) * w0, -(k / w0 + (beta / k) * (k + 1.0))])

    left, left_samples = _integrate(rhs, w0, w_match, left0, rtol, samples)
    right, right_samples = _integrate(rhs, math.pi - w0, w_match, right0, rtol, samples)
    wronskian = left[0] * right[1] - left[1] * right[0]
    scale = np.linalg.norm(left) * np.linalg.norm(right)
    if samples:
        # Continuous at the junction so that sign changes count nodes only.
        left_samples = left_samples / abs(left[0])
        right_samples = right_samples / right[0] * np.sign(left[0])
    return wronskian / scale, left_samples, right_samples


def _closed_form_ads(ode: RadialODE, n: int) -> float:
    K = n + ode.k
    x = deformed_level(K, ode.z_mu, K * K - ode.p0, -ode.eta)
    assert x is not None
    return x


def default_bracket(ode: RadialODE, n_target: int) -> Tuple[float, float]:
    """Midpoints to the neighbouring closed-form levels of the same partial wave."""
    here = _closed_form_ads(ode, n_target)
    above = _closed_form_ads(ode, n_target + 1)
    if n_target > 0:
        below = _closed_form_ads(ode, n_target - 1)
        lo = 0.5 * (below + here)
    else:
        lo = here - 0.5 * (above - here)
    return max(lo, 0.0), 0.5 * (here + above)


def shoot_eigenvalue(
    ode: RadialODE,
    n_target: int,
    bracket: Optional[Tuple[float, float]] = None,
    rtol: float = DEFAULT_RTOL,
) -> ShootingResult:
    """
    Eigenvalue with n_target nodes, as E/mc².

    The AdS radial problem is continued to the compact angle w ∈ (0, π),
    √η·r = sin w, where u = √r·𝔽 obeys
    −u'' + [k(k−1)/sin²w − 2β cot w]u = (p0 + (x² − 1)/η)u,
    the equation `ode_rhs` integrates in r on the physical patch.

    Args:
        ode: Radial equation template; its energy is ignored
        n_target: Node count of the wanted eigenfunction
        bracket: Energy bracket; midpoints to the neighbouring closed-form
            levels when omitted
        rtol: Relative tolerance of the integrator

    Returns:
        ShootingResult with the eigenvalue, matching residual and node count

    Raises:
        DomainError: Outside AdS, at eta = 0 or for Dirac states with γ ≤ 1/2
        NoEigenvalueError: If the bracket holds no eigenvalue with n_target nodes
        StiffFailureError: If the integrator stalls
    """
    if ode.space is not SpaceKind.ANTI_DE_SITTER:
        raise DomainError("shooting is implemented for the anti-de Sitter branch only")
    if ode.eta <= 0.0:
        raise DomainError("shooting needs eta > 0")
    if ode.kind is EquationKind.DIRAC and math.sqrt(ode.exponent_sq) <= 0.5:
        raise DomainError(
            f"gamma={math.sqrt(ode.exponent_sq):.6f} <= 1/2: the origin exponent is "
            f"not positive, state not handled by the shooting oracle"
        )
    if bracket is None:
        bracket = default_bracket(ode, n_target)
    lo, hi = bracket

    def mismatch(x: float) -> float:
        trial = ode.at_energy(x)
        value, _, _ = _shoot(trial, _matching_point(trial, n_target), rtol)
        return value

    f_lo, f_hi = mismatch(lo), mismatch(hi)
    logger.debug(
        f"shoot n={n_target}: W({lo:.15g})={f_lo:.3e}, W({hi:.15g})={f_hi:.3e}"
    )
    if f_lo * f_hi > 0.0:
        raise NoEigenvalueError(
            f"matching determinant keeps its sign on [{lo}, {hi}] (n={n_target})"
        )
    x = brentq(mismatch, lo, hi, xtol=1e-15, rtol=4.0 * np.finfo(float).eps)

    converged = ode.at_energy(x)
    w_match = _matching_point(converged, n_target)
    residual, left, right = _shoot(converged, w_match, rtol, samples=NODE_SAMPLES)
    nodes = count_nodes(np.concatenate([left, right[::-1]]), rel_floor=0.0)
    if nodes != n_target:
        raise NoEigenvalueError(
            f"converged eigenfunction has {nodes} nodes, expected {n_target}"
        )
    logger.info(
        f"shoot n={n_target}: x={x:.15g}, residual={residual:.2e}, nodes={nodes}"
    )
    return ShootingResult(
        result=EnergyResult(value=x, validity=Validity.OK, branch=ode.space),
        matching_residual=abs(residual),
        nodes=nodes,
        bracket=(lo, hi),
    )
