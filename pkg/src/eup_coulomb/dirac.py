"""
Dirac Coulomb spectra under the extended uncertainty principle.

Closed-form dS/AdS levels, the λ-expansion, the fine-structure and EUP
correction split of the non-relativistic limit, and the hydrogen-like
level table.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from src.eup_coulomb.exceptions import (
    ComplexExponentError,
    DomainError,
    InvalidParameterError,
)
from src.eup_coulomb.kg import deformed_level
from src.eup_coulomb.models import (
    DeformationParams,
    DiracState,
    EnergyResult,
    SpaceKind,
    UnitMode,
    UnitSystem,
    Validity,
    make_deformation,
    sommerfeld_mu,
)

logger = logging.getLogger(__name__)

# √λ used for the hydrogen-like table, in m⁻¹.
HYDROGEN_TABLE_SQRT_LAMBDA = 0.252e6

# (N, l, j) in table order.
HYDROGEN_TABLE_STATES = [
    (1, 0, 0.5),
    (2, 0, 0.5),
    (2, 1, 0.5),
    (2, 1, 1.5),
    (3, 0, 0.5),
    (3, 1, 0.5),
    (3, 1, 1.5),
    (3, 2, 1.5),
    (3, 2, 2.5),
]


@dataclass(frozen=True)
class DiracSpectrumInputs:
    """Both signs of κ give the same level; only j enters the energy."""

    state: DiracState
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
    def gamma_sq(self) -> float:
        return self.state.kappa ** 2 - self.z_mu ** 2

    @property
    def gamma(self) -> Optional[float]:
        gsq = self.gamma_sq
        return math.sqrt(gsq) if gsq >= 0.0 else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state": self.state.to_dict(),
            "Z": self.Z,
            "deformation": self.deformation.to_dict(),
            "gamma": self.gamma,
        }


@dataclass(frozen=True)
class Table1Row:
    N: int
    l: int
    j: float
    label: str
    epsilon: float
    delta_eps: float

    @property
    def delta_eps_abs(self) -> float:
        return abs(self.delta_eps)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "l": self.l,
            "j": self.j,
            "label": self.label,
            "epsilon": self.epsilon,
            "delta_eps": self.delta_eps,
            "delta_eps_abs": self.delta_eps_abs,
        }


def gamma(kappa: int, z_mu: float) -> float:
    """γ = √(κ² − (Zμ)²); γ = 0 at Zμ = |κ| is admitted."""
    if kappa == 0:
        raise InvalidParameterError("kappa must be nonzero")
    gsq = kappa * kappa - z_mu * z_mu
    if gsq < 0.0:
        raise ComplexExponentError(
            f"Zmu = {z_mu:.6f} > |kappa| = {abs(kappa)}: no regular polynomial solution"
        )
    return math.sqrt(gsq)


def _dirac_bracket(K: float, gamma_value: float) -> float:
    # Equals K² + (Zμ)² − (j+1/2)².
    return K * K - gamma_value * gamma_value


def energy_dirac(inputs: DiracSpectrumInputs) -> EnergyResult:
    """
    Closed-form Dirac level on the requested branch.

    Args:
        inputs: State given by (N, κ), charge, deformation and unit system

    Returns:
        EnergyResult; COMPLEX_EXPONENT once γ² <= 0 and UNPHYSICAL_RADICAND
        when the dS radicand is negative, both with value None
    """
    space = inputs.deformation.space
    try:
        g = gamma(inputs.state.kappa, inputs.z_mu)
    except ComplexExponentError as e:
        logger.debug(f"{inputs.state.label}: {e}")
        return EnergyResult.invalid(Validity.COMPLEX_EXPONENT, space)

    K = inputs.state.n + g
    x = deformed_level(
        K, inputs.z_mu, _dirac_bracket(K, g), inputs.deformation.signed_eta
    )
    if x is None:
        return EnergyResult.invalid(Validity.UNPHYSICAL_RADICAND, space)
    return EnergyResult(
        value=inputs.units.from_natural_energy(x), validity=Validity.OK, branch=space
    )


def epsilon_dirac(state: DiracState, z_mu: float, units: UnitSystem) -> float:
    g = gamma(state.kappa, z_mu)
    x = deformed_level(state.n + g, z_mu, 0.0, 0.0)
    return units.from_natural_energy(x)


def energy_dirac_first_order(inputs: DiracSpectrumInputs) -> float:
    g = gamma(inputs.state.kappa, inputs.z_mu)
    K = inputs.state.n + g
    eps = epsilon_dirac(inputs.state, inputs.z_mu, inputs.units)
    return eps - 0.5 * inputs.deformation.signed_eta * eps * _dirac_bracket(K, g)


def fine_structure_epsilon(state: DiracState, Z: int, units: UnitSystem) -> float:
    """Bohr level plus the (Zμ)⁴ fine-structure term."""
    za2 = (Z * units.mu) ** 2
    N = float(state.N)
    jh = float(state.j_plus_half)
    x = -za2 / (2.0 * N ** 2) - za2 ** 2 / (2.0 * N ** 4) * (N / jh - 0.75)
    return units.from_natural_energy(x)


def eup_correction(
    state: DiracState, Z: int, deformation: DeformationParams, units: UnitSystem
) -> float:
    """Signed deformation correction to the non-relativistic level; zero at N = j+1/2."""
    z_mu = Z * units.mu
    za2 = z_mu ** 2
    N = float(state.N)
    jh = float(state.j_plus_half)

    dressing = 1.0 - za2 / (2.0 * N ** 2) - za2 ** 2 / (2.0 * N ** 4) * (N / jh - 0.75)
    core = N ** 2 - jh ** 2 - za2 * (1.0 + za2 / (4.0 * jh ** 2)) * (N / jh - 1.0)
    x = -0.5 * deformation.signed_eta * dressing * core
    return units.from_natural_energy(x)


def dirac_nonrel_expansion(
    state: DiracState, Z: int, deformation: DeformationParams, units: UnitSystem
) -> float:
    """W = E − mc² as fine-structure level plus deformation correction."""
    return fine_structure_epsilon(state, Z, units) + eup_correction(
        state, Z, deformation, units
    )


def table_deformation(units: UnitSystem) -> DeformationParams:
    return make_deformation(
        SpaceKind.DE_SITTER, HYDROGEN_TABLE_SQRT_LAMBDA ** 2, units
    )


def table1(
    units: UnitSystem, deformation: Optional[DeformationParams] = None
) -> List[Table1Row]:
    """
    Hydrogen (Z = 1) levels 1s through 3d_{5/2}, regenerated on every call.

    Args:
        units: Physical unit system; energies come out in eV
        deformation: Deformation for the correction column, the table's own
            dS value when omitted

    Returns:
        One row per state with the fine-structure level and its shift

    Raises:
        InvalidParameterError: If units are not physical
    """
    if units.mode is not UnitMode.PHYSICAL:
        raise InvalidParameterError("the hydrogen-like table is defined in physical units")
    if deformation is None:
        deformation = table_deformation(units)

    rows = []
    for N, l, j in HYDROGEN_TABLE_STATES:
        state = DiracState.from_l_j(N, l, j)
        rows.append(
            Table1Row(
                N=N,
                l=l,
                j=j,
                label=state.label,
                epsilon=fine_structure_epsilon(state, 1, units),
                delta_eps=eup_correction(state, 1, deformation, units),
            )
        )
    logger.info(f"Generated {len(rows)} hydrogen-like rows at eta={deformation.eta:.6e}")
    return rows


def max_N_ds_dirac(j: float, Z: int, deformation: DeformationParams) -> Optional[int]:
    """Largest N >= j+1/2 with a nonnegative dS radicand, None if there is none."""
    if deformation.space is not SpaceKind.DE_SITTER:
        raise DomainError("max_N_ds_dirac applies to the de Sitter branch only")
    if deformation.eta <= 0.0:
        raise DomainError("eta = 0: no dS bound on N")

    jh = int(round(j + 0.5))
    g = gamma(jh, Z * sommerfeld_mu())

    def physical(N: int) -> bool:
        K = N - jh + g
        return 1.0 - deformation.eta * _dirac_bracket(K, g) >= 0.0

    N_min = jh
    if not physical(N_min):
        return None
    K_max = math.sqrt(1.0 / deformation.eta + g * g)
    N = max(N_min, int(math.floor(K_max - g + jh)))
    while N > N_min and not physical(N):
        N -= 1
    while physical(N + 1):
        N += 1
    return N
