"""
EUP Coulomb spectra

Closed-form and numerically verified bound-state energies and radial
wavefunctions of Klein-Gordon and Dirac particles in a Coulomb field under
the extended uncertainty principle, for de Sitter and anti-de Sitter
deformations.
"""

from .dirac import DiracSpectrumInputs, energy_dirac, table1
from .kg import KGSpectrumInputs, energy_kg
from .models import DiracState, EnergyResult, KGState, SpaceKind, UnitSystem
from .serializer import RecordSerializer

__version__ = "0.1.0"
__all__ = [
    "DiracSpectrumInputs",
    "DiracState",
    "EnergyResult",
    "KGSpectrumInputs",
    "KGState",
    "RecordSerializer",
    "SpaceKind",
    "UnitSystem",
    "energy_dirac",
    "energy_kg",
    "table1",
]
