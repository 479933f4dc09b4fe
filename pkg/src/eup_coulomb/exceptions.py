"""
Exception hierarchy for spectrum, wavefunction and verification errors.
"""


class SpectrumError(ValueError):
    """Base class for every error raised by the library."""


class InvalidParameterError(SpectrumError):
    """A precondition on inputs (quantum numbers, λ, hypergeometric C) failed."""


class ComplexExponentError(SpectrumError):
    """δ² (KG) or γ² (Dirac) is not positive: no regular polynomial solution."""


class UnphysicalRadicandError(SpectrumError):
    """The square-root argument in the closed-form numerator is negative."""


class OutOfDomainError(SpectrumError):
    """A quantization radicand is negative at the trial energy."""


class DomainError(SpectrumError):
    """A radius lies outside the radial domain of the representation."""


class NoRootError(SpectrumError):
    """No sign change of the quantization residual on the admissible bracket."""


class SingularMixingError(SpectrumError):
    """The prefactor that recovers g1 from g2 vanishes."""


class NonIntegrableError(SpectrumError):
    """The normalization integral did not converge."""


class NoEigenvalueError(SpectrumError):
    """The shooting matching function has no sign change in the bracket."""


class StiffFailureError(SpectrumError):
    """The ODE integrator failed to advance (step-size collapse)."""


class ConfigError(SpectrumError):
    """A run configuration could not be resolved."""
