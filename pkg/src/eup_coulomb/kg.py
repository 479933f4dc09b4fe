"""
Klein-Gordon Coulomb spectra under the extended uncertainty principle.

Closed-form dS and AdS levels, their expansions in the deformation and the
validity gates. Everything is evaluated in x = E/mc² and scaled by the unit
system on the way out.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

from src.eup_coulomb.exceptions import (
    ComplexExponentError,
    DomainError,
    InvalidParameterError,
    UnphysicalRadicandError,
)
from src.eup_coulomb.models import (
    DeformationParams,
    EnergyResult,
    KGState,
    SpaceKind,
    UnitSystem,
    Validity,
    sommerfeld_mu,
)

logger = logging.getLogger(__name__)

# Charge bound quoted for s-waves; the δ² gate stops one unit earlier.
QUOTED_S_WAVE_CHARGE_LIMIT = 69


@dataclass(frozen=True)
class KGSpectrumInputs:
    state: KGState
    Z: int
    deformation: DeformationParams
    units: UnitSystem

    def __post_init__(self) -> None:
        if self.Z < 0:
            raise InvalidParameterError(f"Z must be >= 0 (got {self.Z})")

    @property
    def z_mu(self) -> float:
        return self.Z * self.units.mu

    @property
    def delta_sq(self) -> float:
        return delta_squared(self.state.l, self.z_mu)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state": self.state.to_dict(),
            "Z": self.Z,
            "deformation": self.deformation.to_dict(),
            "delta_sq": self.delta_sq,
        }


def delta_squared(l: int, z_mu: float) -> float:
    """δ² = (l + 1/2)² − (Zμ)²."""
    return (l + 0.5) ** 2 - z_mu ** 2


def deformed_level(
    K: float, z_mu: float, bracket: float, signed_eta: float
) -> Optional[float]:
    """
    Shared closed form x = K·√(1 − s·η·B)/√(K² + (Zμ)²).

    Written with K in the numerator so that K = 0 gives x = 0 exactly.
    Returns None when the radicand is negative.
    """
    radicand = 1.0 - signed_eta * bracket
    if radicand < 0.0:
        return None
    return K * math.sqrt(radicand) / math.sqrt(K * K + z_mu * z_mu)


def _kg_effective_principal(state: KGState, delta_sq: float) -> float:
    return state.n + math.sqrt(delta_sq) + 0.5


def _kg_bracket(K: float, delta_sq: float) -> float:
    # Equals K² + (Zμ)² − l(l+1) − 1.
    return K * K - delta_sq - 0.75


def _check_gate(l: int, Z: int, delta_sq: float) -> None:
    if delta_sq > 0.0:
        return
    if l == 0 and Z <= QUOTED_S_WAVE_CHARGE_LIMIT:
        logger.warning(
            f"Z={Z} lies inside the quoted s-wave bound Z <= "
            f"{QUOTED_S_WAVE_CHARGE_LIMIT} but delta^2={delta_sq:.3e} <= 0; "
            f"the delta^2 gate wins"
        )
    raise ComplexExponentError(
        f"delta^2 = {delta_sq:.6e} <= 0 for l={l}, Z={Z}: no regular solution"
    )


def energy_kg(inputs: KGSpectrumInputs) -> EnergyResult:
    """
    Closed-form level on the requested branch, classified instead of raised.

    Args:
        inputs: State, charge, deformation and unit system

    Returns:
        EnergyResult in the unit system's energy unit; value is None when the
        validity is COMPLEX_EXPONENT or UNPHYSICAL_RADICAND
    """
    space = inputs.deformation.space
    delta_sq = inputs.delta_sq
    try:
        _check_gate(inputs.state.l, inputs.Z, delta_sq)
    except ComplexExponentError as e:
        logger.debug(f"{inputs.state.label}: {e}")
        return EnergyResult.invalid(Validity.COMPLEX_EXPONENT, space)

    K = _kg_effective_principal(inputs.state, delta_sq)
    x = deformed_level(
        K, inputs.z_mu, _kg_bracket(K, delta_sq), inputs.deformation.signed_eta
    )
    if x is None:
        logger.debug(
            f"{inputs.state.label}: negative radicand at eta={inputs.deformation.eta}"
        )
        return EnergyResult.invalid(Validity.UNPHYSICAL_RADICAND, space)
    return EnergyResult(
        value=inputs.units.from_natural_energy(x), validity=Validity.OK, branch=space
    )


def epsilon_kg(state: KGState, z_mu: float, units: UnitSystem) -> float:
    """Undeformed relativistic Klein-Gordon level."""
    delta_sq = delta_squared(state.l, z_mu)
    if delta_sq <= 0.0:
        raise ComplexExponentError(
            f"delta^2 = {delta_sq:.6e} <= 0 for l={state.l}, Zmu={z_mu}"
        )
    K = _kg_effective_principal(state, delta_sq)
    x = deformed_level(K, z_mu, 0.0, 0.0)
    return units.from_natural_energy(x)


def energy_kg_first_order(inputs: KGSpectrumInputs) -> float:
    """
    Level to first order in the deformation, ε(1 − sηB/2).

    Raises:
        ComplexExponentError: If δ² <= 0 for the state
    """
    delta_sq = inputs.delta_sq
    _check_gate(inputs.state.l, inputs.Z, delta_sq)
    K = _kg_effective_principal(inputs.state, delta_sq)
    eps = epsilon_kg(inputs.state, inputs.z_mu, inputs.units)
    bracket = _kg_bracket(K, delta_sq)
    return eps - 0.5 * inputs.deformation.signed_eta * eps * bracket


def kg_nonrel_expansion(
    state: KGState, Z: int, deformation: DeformationParams, units: UnitSystem
) -> float:
    """
    W = E − mc² expanded to order (Zμ)⁴, λ and λ·(Zμ)⁴.

    Groups: Bohr term, pure deformation term, relativistic fine structure
    dressed by the deformation, and the λ·(Zμ)² cross terms.
    """
    z_mu = Z * units.mu
    delta_sq = delta_squared(state.l, z_mu)
    _check_gate(state.l, Z, delta_sq)

    N = float(state.N)
    lh = state.l + 0.5
    eta = deformation.signed_eta
    za2 = z_mu ** 2
    tail = N ** 2 - state.l * (state.l + 1) - 1.0

    bohr = -za2 / (2.0 * N ** 2)
    pure = -0.5 * eta * tail
    fine = (
        -(za2 ** 2) / (2.0 * N ** 4) * (N / lh - 0.75) * (1.0 - 0.5 * eta * tail)
    )
    cross = (
        0.5
        * eta
        * za2
        / (2.0 * N ** 2)
        * (
            (2.0 * N ** 3 / lh - N ** 2 - state.l * (state.l + 1) - 1.0)
            + za2
            * (1.0 + N ** 3 / (2.0 * lh ** 3) - N ** 2 / (2.0 * lh ** 2) - N / lh)
        )
    )
    return units.from_natural_energy(bohr + pure + fine + cross)


def max_N_ds(l: int, Z: int, deformation: DeformationParams) -> Optional[int]:
    """
    Largest N >= l+1 whose dS radicand 1 − η·B stays nonnegative.

    Returns None when even N = l+1 is unphysical.
    """
    if deformation.space is not SpaceKind.DE_SITTER:
        raise DomainError("max_N_ds applies to the de Sitter branch only")
    if deformation.eta <= 0.0:
        raise DomainError("eta = 0: no dS bound on N")

    z_mu = Z * sommerfeld_mu()
    delta_sq = delta_squared(l, z_mu)
    _check_gate(l, Z, delta_sq)
    delta = math.sqrt(delta_sq)

    def physical(N: int) -> bool:
        K = N - l - 1 + delta + 0.5
        return 1.0 - deformation.eta * _kg_bracket(K, delta_sq) >= 0.0

    N_min = l + 1
    if not physical(N_min):
        return None
    # B grows with N, so invert K² <= 1/η + δ² + 3/4 and polish by stepping.
    K_max = math.sqrt(1.0 / deformation.eta + delta_sq + 0.75)
    N = max(N_min, int(math.floor(K_max - delta + l + 0.5)))
    while N > N_min and not physical(N):
        N -= 1
    while physical(N + 1):
        N += 1
    logger.debug(f"max_N_ds(l={l}, Z={Z}, eta={deformation.eta}) = {N}")
    return N


def require_ok(result: EnergyResult, what: str) -> float:
    """Unwrap an EnergyResult, raising the exception that matches its validity."""
    if result.validity is Validity.COMPLEX_EXPONENT:
        raise ComplexExponentError(f"{what}: complex exponent")
    if result.validity is Validity.UNPHYSICAL_RADICAND:
        raise UnphysicalRadicandError(f"{what}: negative radicand")
    assert result.value is not None
    return result.value
