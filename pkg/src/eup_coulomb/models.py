"""
Data models shared by the spectrum, wavefunction and verification modules.

All spectrum formulas work with the dimensionless pair (Zμ, η); the unit
system is only consulted at the API boundary.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

from src.eup_coulomb.exceptions import InvalidParameterError

# Pinned constants. ħc is the CODATA value; mc² and μ are the values quoted
# alongside the hydrogen-like table.
SOMMERFELD_INVERSE = 137.03602
ELECTRON_REST_ENERGY_EV = 511004.1
HBAR_C_EV_M = 1.9732698e-7

SPECTROSCOPIC_LETTERS = "spdfghiklmnoqrtuv"


def sommerfeld_mu() -> float:
    """Return Sommerfeld's fine-structure constant μ = e²/ħc."""
    return 1.0 / SOMMERFELD_INVERSE


class SpaceKind(Enum):
    """Deformation branch: de Sitter (s = +1) or anti-de Sitter (s = -1)."""

    DE_SITTER = "ds"
    ANTI_DE_SITTER = "ads"

    @property
    def sign(self) -> int:
        return 1 if self is SpaceKind.DE_SITTER else -1

    @classmethod
    def from_string(cls, value: str) -> "SpaceKind":
        try:
            return cls(value.lower())
        except ValueError:
            raise InvalidParameterError(
                f"Unknown space '{value}', expected 'ds' or 'ads'"
            ) from None


class UnitMode(Enum):
    NATURAL = "natural"
    PHYSICAL = "physical"


class Validity(Enum):
    """Classification attached to every closed-form energy."""

    OK = "ok"
    COMPLEX_EXPONENT = "complex_exponent"
    UNPHYSICAL_RADICAND = "unphysical_radicand"


class ExponentBranch(Enum):
    """
    Which Frobenius exponent at y = 0 carries a dS level.

    REGULAR levels decay at large r and are normalizable; IRREGULAR levels
    solve the squared quantization condition with the growing exponent.
    AdS levels are always reported as REGULAR.
    """

    REGULAR = "regular"
    IRREGULAR = "irregular"

    @property
    def sign(self) -> int:
        return 1 if self is ExponentBranch.REGULAR else -1


@dataclass(frozen=True)
class UnitSystem:
    """Constants bundle: natural (ħ = c = m = 1) or physical (eV, metre)."""

    mode: UnitMode
    mc2: float
    hbar_c: float
    mu: float

    @classmethod
    def natural(cls) -> "UnitSystem":
        return cls(mode=UnitMode.NATURAL, mc2=1.0, hbar_c=1.0, mu=sommerfeld_mu())

    @classmethod
    def physical(cls) -> "UnitSystem":
        return cls(
            mode=UnitMode.PHYSICAL,
            mc2=ELECTRON_REST_ENERGY_EV,
            hbar_c=HBAR_C_EV_M,
            mu=sommerfeld_mu(),
        )

    @classmethod
    def from_string(cls, value: str) -> "UnitSystem":
        mode = value.lower()
        if mode == UnitMode.NATURAL.value:
            return cls.natural()
        if mode == UnitMode.PHYSICAL.value:
            return cls.physical()
        raise InvalidParameterError(
            f"Unknown unit system '{value}', expected 'natural' or 'physical'"
        )

    @property
    def compton_length(self) -> float:
        """Reduced Compton wavelength ħ/mc in the system's length unit."""
        return self.hbar_c / self.mc2

    def to_natural_energy(self, energy: float) -> float:
        return energy / self.mc2

    def from_natural_energy(self, energy_over_mc2: float) -> float:
        return energy_over_mc2 * self.mc2

    def to_natural_length(self, length: float) -> float:
        return length / self.compton_length

    def from_natural_length(self, length: float) -> float:
        return length * self.compton_length

    def eta_from_lambda(self, lam: float) -> float:
        """η = (ħc)²λ/(mc²)²."""
        return self.hbar_c ** 2 * lam / self.mc2 ** 2

    def lambda_from_eta(self, eta: float) -> float:
        return eta * self.mc2 ** 2 / self.hbar_c ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "mc2": self.mc2,
            "hbar_c": self.hbar_c,
            "mu": self.mu,
        }


@dataclass(frozen=True)
class DeformationParams:
    """λ stored as a magnitude; the branch sign lives in `space`."""

    lam: float
    space: SpaceKind
    eta: float

    @property
    def signed_eta(self) -> float:
        return self.space.sign * self.eta

    def to_dict(self) -> Dict[str, Any]:
        return {"lambda": self.lam, "space": self.space.value, "eta": self.eta}


def make_deformation(space: SpaceKind, lam: float, units: UnitSystem) -> DeformationParams:
    """Package (branch, λ) with the dimensionless strength η of the unit system."""
    if lam < 0:
        raise InvalidParameterError(
            f"lambda must be >= 0 (got {lam}); select anti-de Sitter through the "
            f"space branch, not through a negative lambda"
        )
    return DeformationParams(lam=float(lam), space=space, eta=units.eta_from_lambda(lam))


def make_deformation_from_eta(
    space: SpaceKind, eta: float, units: UnitSystem
) -> DeformationParams:
    if eta < 0:
        raise InvalidParameterError(f"eta must be >= 0 (got {eta})")
    return DeformationParams(lam=units.lambda_from_eta(eta), space=space, eta=float(eta))


@dataclass(frozen=True)
class KGState:
    """Spin-0 quantum numbers; n = N - l - 1 is the polynomial degree."""

    N: int
    l: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise InvalidParameterError(f"N must be >= 1 (got {self.N})")
        if not 0 <= self.l <= self.N - 1:
            raise InvalidParameterError(
                f"l must satisfy 0 <= l <= N-1 (got N={self.N}, l={self.l})"
            )

    @property
    def n(self) -> int:
        return self.N - self.l - 1

    @property
    def label(self) -> str:
        return f"{self.N}{SPECTROSCOPIC_LETTERS[self.l]}"

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.N, "l": self.l, "n": self.n}


@dataclass(frozen=True)
class DiracState:
    """Spin-1/2 quantum numbers (N, j, κ); n = N - j - 1/2."""

    N: int
    j: float
    kappa: int

    def __post_init__(self) -> None:
        two_j = round(2 * self.j)
        if abs(2 * self.j - two_j) > 1e-12 or two_j % 2 != 1 or two_j < 1:
            raise InvalidParameterError(
                f"j must be a positive half-odd integer (got {self.j})"
            )
        if self.kappa == 0 or abs(self.kappa) != (two_j + 1) // 2:
            raise InvalidParameterError(
                f"|kappa| must equal j + 1/2 (got j={self.j}, kappa={self.kappa})"
            )
        if self.N < 1 or (two_j + 1) // 2 > self.N:
            raise InvalidParameterError(
                f"j + 1/2 <= N violated (got N={self.N}, j={self.j})"
            )

    @classmethod
    def from_l_j(cls, N: int, l: int, j: float) -> "DiracState":
        """κ = -(l+1) for j = l + 1/2 and κ = l for j = l - 1/2."""
        if abs(j - (l + 0.5)) < 1e-12:
            kappa = -(l + 1)
        elif abs(j - (l - 0.5)) < 1e-12 and l >= 1:
            kappa = l
        else:
            raise InvalidParameterError(f"j must be l +/- 1/2 (got l={l}, j={j})")
        return cls(N=N, j=float(j), kappa=kappa)

    @classmethod
    def from_kappa(cls, N: int, kappa: int) -> "DiracState":
        return cls(N=N, j=abs(kappa) - 0.5, kappa=kappa)

    @property
    def j_plus_half(self) -> int:
        return abs(self.kappa)

    @property
    def l(self) -> int:
        return -self.kappa - 1 if self.kappa < 0 else self.kappa

    @property
    def n(self) -> int:
        return self.N - self.j_plus_half

    @property
    def label(self) -> str:
        return f"{self.N}{SPECTROSCOPIC_LETTERS[self.l]}_{{{2 * self.j_plus_half - 1}/2}}"

    def to_dict(self) -> Dict[str, Any]:
        return {"N": self.N, "j": self.j, "kappa": self.kappa, "l": self.l, "n": self.n}


@dataclass(frozen=True)
class EnergyResult:
    """Closed-form or numerical energy with its validity classification."""

    value: Optional[float]
    validity: Validity
    branch: SpaceKind
    exponent: Optional[ExponentBranch] = None

    @property
    def is_ok(self) -> bool:
        return self.validity is Validity.OK

    @classmethod
    def invalid(cls, validity: Validity, branch: SpaceKind) -> "EnergyResult":
        return cls(value=None, validity=validity, branch=branch)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "value": self.value,
            "validity": self.validity.value,
            "branch": self.branch.value,
        }
        if self.exponent is not None:
            data["exponent"] = self.exponent.value
        return data
