"""
Bound-state radial wavefunctions.

Radial functions are built from the exponents of the transformed equation
and a terminating hypergeometric polynomial. Internally everything runs on
the compact coordinate w, with √η·r = sinh w in de Sitter and
√η·r = sin w in anti-de Sitter (r in units of ħ/mc). There

    y = (1 − coth w)/2 = −1/(e^{2w} − 1)     (dS, y < 0)
    y = (1 + i·cot w)/2                      (AdS, 1 − y = conj(y))

and the deformed measure r²dr/√(1 + sλr²) of |ψ|² becomes du²·dw/√η with
u = r·ψ. AdS states live on the continued domain 0 < w < π, of which the
physical patch r < 1/√λ is w < π/2. Samples are scaled by exp(−log_scale)
fixed at the envelope peak so that strongly bound states stay representable
in floating point.
"""

import logging
import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import IntegrationWarning, quad

from src.eup_coulomb.dirac import DiracSpectrumInputs, energy_dirac
from src.eup_coulomb.exceptions import (
    DomainError,
    InvalidParameterError,
    NonIntegrableError,
    SingularMixingError,
)
from src.eup_coulomb.kg import KGSpectrumInputs, energy_kg, require_ok
from src.eup_coulomb.models import ExponentBranch, SpaceKind
from src.eup_coulomb.quantize import (
    EquationKind,
    QuantizationProblem,
    ads_radicand,
    closed_form_one_minus_sq,
    ds_radicands,
    select_branch,
)

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

COEFFICIENT_DPS = 40
QUAD_EPSREL = 1e-11
QUAD_LIMIT = 400
DECAY_LENGTHS = 60.0
OVERLAP_EPSABS = 1e-12


class RadialKind(Enum):
    KG = "kg"
    DIRAC_G2 = "dirac_g2"


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------


def _check_radius(r: np.ndarray, lam: float, space: SpaceKind) -> None:
    if lam <= 0.0:
        raise DomainError("the transform needs lambda > 0")
    if np.any(r <= 0.0):
        raise DomainError("r must be > 0")
    if space is SpaceKind.ANTI_DE_SITTER and np.any(r * math.sqrt(lam) >= 1.0):
        raise DomainError(
            f"AdS radii must satisfy r < 1/sqrt(lambda) = {1.0 / math.sqrt(lam):.6e}"
        )


def x_of_r(r: Any, lam: float, space: SpaceKind) -> Any:
    """
    ϰ = √(1 + sλr²)/(√(sλ)·r) on the principal branch.

    Real and > 1 in dS; purely imaginary, −i·√(1 − λr²)/(√λ r), in AdS.
    """
    r_arr = np.asarray(r, dtype=float)
    _check_radius(r_arr, lam, space)
    root_lam = math.sqrt(lam)
    if space is SpaceKind.DE_SITTER:
        out: Any = np.sqrt(1.0 + lam * r_arr ** 2) / (root_lam * r_arr)
    else:
        out = -1j * np.sqrt(1.0 - lam * r_arr ** 2) / (root_lam * r_arr)
    return out if np.ndim(r) else np.asarray(out).item()


def y_of_r(r: Any, lam: float, space: SpaceKind) -> Any:
    """y = (1 − ϰ)/2."""
    return (1.0 - x_of_r(r, lam, space)) / 2.0


def compact_coordinate(r: Any, eta: float, space: SpaceKind) -> np.ndarray:
    """w with √η·r = sinh w (dS) or sin w (AdS); r in units of ħ/mc."""
    r_arr = np.asarray(r, dtype=float)
    _check_radius(r_arr, eta, space)
    s = math.sqrt(eta) * r_arr
    return np.arcsinh(s) if space is SpaceKind.DE_SITTER else np.arcsin(s)


# ---------------------------------------------------------------------------
# Exponents and polynomial
# ---------------------------------------------------------------------------


def _exponents(
    problem: QuantizationProblem,
    x: float,
    branch: ExponentBranch,
    one_minus_sq: Optional[float] = None,
) -> Tuple[Scalar, Scalar]:
    if problem.space is SpaceKind.ANTI_DE_SITTER:
        root = np.sqrt(ads_radicand(problem, x, one_minus_sq))
        a = 0.25 - 0.5 * root
        return complex(a), complex(np.conj(a))
    r_plus, r_minus = ds_radicands(problem, x, one_minus_sq)
    a = 0.25 + branch.sign * 0.5 * math.sqrt(r_minus)
    b = 0.25 - 0.5 * math.sqrt(r_plus)
    return a, b


def kg_exponents(
    delta_sq: float,
    z_mu: float,
    eta: float,
    E_over_mc2: float,
    space: SpaceKind = SpaceKind.DE_SITTER,
    branch: ExponentBranch = ExponentBranch.REGULAR,
) -> Tuple[Scalar, Scalar]:
    """
    Exponents (a, b) of y and 1 − y for the Klein-Gordon radial function.

    In dS a = 1/4 ± √(P − 2β)/2 (branch sign) and b = 1/4 − √(P + 2β)/2 with
    P = δ² + 3/4 + (1 − x²)/η, β = Zμx/√η. The series terminates when
    a + b + δ = −n. In AdS a is complex and b = conj(a).
    """
    problem = QuantizationProblem(EquationKind.KG, delta_sq, z_mu, eta, 0, space)
    return _exponents(problem, E_over_mc2, branch)


def dirac_exponents(
    gamma: float,
    z_mu: float,
    eta: float,
    E_over_mc2: float,
    space: SpaceKind = SpaceKind.DE_SITTER,
    branch: ExponentBranch = ExponentBranch.REGULAR,
) -> Tuple[Scalar, Scalar]:
    """Same as kg_exponents with P built on γ² and termination a + b + γ − 1/2 = −n."""
    problem = QuantizationProblem(
        EquationKind.DIRAC, gamma * gamma, z_mu, eta, 0, space
    )
    return _exponents(problem, E_over_mc2, branch)


def _check_lower_parameter(n: int, C: Scalar) -> None:
    c = complex(C)
    if abs(c.imag) > 0.0 or n == 0:
        return
    twice = 2.0 * c.real
    if c.real <= 0.0 and abs(twice - round(twice)) < 1e-12:
        raise InvalidParameterError(
            f"lower hypergeometric parameter C={C} is a non-positive (half-)integer"
        )


def hyp_coefficients(n: int, B: Scalar, C: Scalar) -> np.ndarray:
    """Coefficients (−n)_k (B)_k / ((C)_k k!) for k = 0..n, in extended precision."""
    if n < 0:
        raise InvalidParameterError(f"polynomial degree must be >= 0 (got {n})")
    _check_lower_parameter(n, C)
    with mpmath.workdps(COEFFICIENT_DPS):
        b, c = mpmath.mpmathify(B), mpmath.mpmathify(C)
        coeffs = [
            mpmath.rf(-n, k) * mpmath.rf(b, k) / (mpmath.rf(c, k) * mpmath.factorial(k))
            for k in range(n + 1)
        ]
        return np.array([complex(value) for value in coeffs])


def hyp_polynomial(n: int, B: Scalar, C: Scalar, y: Any) -> Any:
    """Terminating F(−n, B; C; y), evaluated by Horner's rule."""
    coeffs = hyp_coefficients(n, B, C)
    if all(abs(c.imag) == 0.0 for c in coeffs) and np.isrealobj(y):
        coeffs = coeffs.real
    return npoly.polyval(y, coeffs)


# ---------------------------------------------------------------------------
# Radial solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialSolution:
    """
    Exponents, polynomial and normalization of one bound state.

    `norm` multiplies the scaled samples returned by the radial functions;
    it is None until `normalized` has run.
    """

    kind: RadialKind
    a: Scalar
    b: Scalar
    n: int
    hyp_B: Scalar
    hyp_C: Scalar
    coeffs: Tuple[complex, ...]
    space: SpaceKind
    eta: float
    z_mu: float
    energy: float
    d: float
    exponent: ExponentBranch
    w_ref: float
    log_scale: float = 0.0
    phase: complex = 1.0 + 0.0j
    kappa: Optional[int] = None
    compton_length: float = 1.0
    norm: Optional[float] = None
    label: str = ""

    @property
    def K(self) -> float:
        return self.n + self.d + 0.5

    @property
    def gamma(self) -> float:
        return self.d + 0.5

    @property
    def beta(self) -> float:
        return self.z_mu * self.energy / math.sqrt(self.eta)

    @property
    def is_normalizable(self) -> bool:
        return self.space is SpaceKind.ANTI_DE_SITTER or (
            self.exponent is ExponentBranch.REGULAR
        )

    @property
    def decay_rate(self) -> float:
        """
        Exponential decay of u in w past the envelope peak: β/K in AdS,
        β/K − K in dS (0 when a dS level does not decay).
        """
        if self.space is SpaceKind.ANTI_DE_SITTER:
            return self.beta / self.K
        return max(self.beta / self.K - self.K, 0.0)

    def w_range(self) -> Tuple[float, float]:
        """
        Integration range on the compact coordinate.

        AdS uses the continued domain (0, π), whose spectrum the closed forms
        are, cut short once the state has decayed; dS runs to a decay cut-off.

        Raises:
            NonIntegrableError: If a dS level sits on the non-normalizable exponent
        """
        rate = self.decay_rate
        if self.space is SpaceKind.ANTI_DE_SITTER:
            if rate <= 0.0:
                return 0.0, math.pi
            return 0.0, min(math.pi, self.w_ref + (DECAY_LENGTHS + 2.0 * self.n) / rate)
        if rate <= 0.0:
            raise NonIntegrableError(
                f"{self.label or self.kind.value}: level sits on the non-normalizable "
                f"exponent (beta={self.beta:.6e} <= K^2={self.K ** 2:.6e})"
            )
        return 0.0, self.w_ref + (DECAY_LENGTHS + 2.0 * self.n) / rate

    def to_dict(self) -> Dict[str, Any]:
        def encode(value: Scalar) -> Any:
            c = complex(value)
            return c.real if c.imag == 0.0 else [c.real, c.imag]

        return {
            "kind": self.kind.value,
            "label": self.label,
            "a": encode(self.a),
            "b": encode(self.b),
            "n": self.n,
            "hyp_B": encode(self.hyp_B),
            "hyp_C": encode(self.hyp_C),
            "coeffs": [encode(c) for c in self.coeffs],
            "energy": self.energy,
            "exponent": self.exponent.value,
            "norm": self.norm,
            "log_scale": self.log_scale,
        }


def _reference_point(
    space: SpaceKind, beta: float, K: float, exponent: ExponentBranch
) -> float:
    """Envelope peak: coth w = β/K² (dS) or cot w = β/K² (AdS)."""
    if space is SpaceKind.ANTI_DE_SITTER:
        return math.atan2(K * K, beta)
    if exponent is ExponentBranch.REGULAR and beta > K * K:
        return math.atanh(K * K / beta)
    return 1.0


def _log_terms(
    w: np.ndarray, space: SpaceKind, eta: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(y, ln y, ln(1 − y), ln r, dy/dw) on the compact coordinate."""
    if space is SpaceKind.DE_SITTER:
        t = -np.expm1(-2.0 * w)
        log_t = np.log(t)
        y = -np.exp(-2.0 * w) / t
        log_y = (-2.0 * w - log_t) + 1j * math.pi
        log_1my = -log_t + 0j
        log_r = w + log_t - math.log(2.0) - 0.5 * math.log(eta)
        dy_dw = -2.0 * y * (1.0 - y)
        return y + 0j, log_y, log_1my, log_r, dy_dw + 0j
    sin_w = np.sin(w)
    y = 0.5 * (1.0 + 1j * np.cos(w) / sin_w)
    log_y = -np.log(2.0 * sin_w) + 1j * (0.5 * math.pi - w)
    log_r = np.log(sin_w) - 0.5 * math.log(eta)
    dy_dw = -0.5j / sin_w ** 2
    return y, log_y, np.conj(log_y), log_r, dy_dw


def _cotangent(w: np.ndarray, space: SpaceKind) -> np.ndarray:
    return 1.0 / (np.tanh(w) if space is SpaceKind.DE_SITTER else np.tan(w))


def _profile_raw(
    sol: RadialSolution, w: np.ndarray, with_derivative: bool = False
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """u = √r · y^a (1−y)^b · Ξ(y) and optionally du/dw, before scaling."""
    y, log_y, log_1my, log_r, dy_dw = _log_terms(w, sol.space, sol.eta)
    coeffs = np.asarray(sol.coeffs)
    poly = npoly.polyval(y, coeffs)
    # dS: y^a is taken as |y|^a; the constant phase e^{iπa} is dropped.
    if sol.space is SpaceKind.DE_SITTER:
        log_y = log_y.real + 0j
    log_env = sol.a * log_y + sol.b * log_1my + 0.5 * log_r - sol.log_scale
    env = np.exp(log_env)
    u = env * poly
    if not with_derivative:
        return u, None
    dpoly = npoly.polyval(y, npoly.polyder(coeffs)) if sol.n > 0 else 0.0 * y
    half_coth = 0.5 * _cotangent(w, sol.space)
    du = u * (half_coth + (sol.a / y - sol.b / (1.0 - y)) * dy_dw) + env * dpoly * dy_dw
    return u, du


def _build(
    kind: RadialKind,
    problem: QuantizationProblem,
    x: float,
    kappa: Optional[int],
    compton_length: float,
    label: str,
    one_minus_sq: Optional[float] = None,
) -> RadialSolution:
    exponent = select_branch(problem)
    a, b = _exponents(problem, x, exponent, one_minus_sq)
    d = problem.d
    hyp_B = a + b - d
    hyp_C = 0.5 + 2.0 * a
    coeffs = tuple(complex(c) for c in hyp_coefficients(problem.n, hyp_B, hyp_C))
    beta = problem.beta(x)
    w_ref = _reference_point(problem.space, beta, problem.K, exponent)

    sol = RadialSolution(
        kind=kind,
        a=a,
        b=b,
        n=problem.n,
        hyp_B=hyp_B,
        hyp_C=hyp_C,
        coeffs=coeffs,
        space=problem.space,
        eta=problem.eta,
        z_mu=problem.z_mu,
        energy=x,
        d=d,
        exponent=exponent,
        w_ref=w_ref,
        kappa=kappa,
        compton_length=compton_length,
        label=label,
    )
    ref, _ = _profile_raw(sol, np.array([w_ref]))
    log_scale = float(np.log(np.abs(ref[0]))) if ref[0] != 0 else 0.0
    phase = ref[0] / abs(ref[0]) if ref[0] != 0 else 1.0 + 0.0j
    if exponent is ExponentBranch.IRREGULAR:
        logger.warning(f"{label}: non-normalizable exponent at x={x!r}")
    return replace(sol, log_scale=log_scale, phase=complex(phase))


def _closed_form_energy(
    value: float, inputs: Any, problem: QuantizationProblem
) -> Tuple[float, float]:
    energy = inputs.units.to_natural_energy(value)
    return energy, closed_form_one_minus_sq(problem)


def kg_solution(
    inputs: KGSpectrumInputs, energy: Optional[float] = None
) -> RadialSolution:
    """
    Radial solution of a Klein-Gordon level.

    Args:
        inputs: State, charge and deformation (eta > 0)
        energy: Trial energy as E/mc²; the closed-form level when omitted

    Returns:
        RadialSolution, not yet normalized

    Raises:
        ComplexExponentError: If the level is past the delta^2 gate
        UnphysicalRadicandError: If the closed form has no real level
    """
    problem = QuantizationProblem.from_kg(inputs)
    one_minus_sq = None
    if energy is None:
        value = require_ok(energy_kg(inputs), inputs.state.label)
        energy, one_minus_sq = _closed_form_energy(value, inputs, problem)
    return _build(
        RadialKind.KG,
        problem,
        energy,
        None,
        inputs.units.compton_length,
        inputs.state.label,
        one_minus_sq,
    )


def dirac_solution(
    inputs: DiracSpectrumInputs, energy: Optional[float] = None
) -> RadialSolution:
    """Radial solution for the g2 component of a Dirac level."""
    problem = QuantizationProblem.from_dirac(inputs)
    one_minus_sq = None
    if energy is None:
        value = require_ok(energy_dirac(inputs), inputs.state.label)
        energy, one_minus_sq = _closed_form_energy(value, inputs, problem)
    return _build(
        RadialKind.DIRAC_G2,
        problem,
        energy,
        inputs.state.kappa,
        inputs.units.compton_length,
        inputs.state.label,
        one_minus_sq,
    )


def _scaled_u(sol: RadialSolution, w: np.ndarray) -> np.ndarray:
    u, _ = _profile_raw(sol, w)
    u = (u * np.conj(sol.phase)).real
    return u * sol.norm if sol.norm is not None else u


def _to_compact(sol: RadialSolution, r: Any) -> np.ndarray:
    r_nat = np.asarray(r, dtype=float) / sol.compton_length
    return compact_coordinate(r_nat, sol.eta, sol.space)


def radial_kg(solution: RadialSolution, r: Any) -> np.ndarray:
    """Samples of ψ(r) = 𝔽(r)/√r on a radial grid given in the unit system's length."""
    if solution.kind is not RadialKind.KG:
        raise InvalidParameterError("radial_kg needs a Klein-Gordon solution")
    r_nat = np.asarray(r, dtype=float) / solution.compton_length
    w = compact_coordinate(r_nat, solution.eta, solution.space)
    return _scaled_u(solution, w) / r_nat


# ---------------------------------------------------------------------------
# Dirac components
# ---------------------------------------------------------------------------


def mixing_x(kappa: int, z_mu: float) -> float:
    """X = (γ − κ)/Zμ; satisfies X² + 2κX/Zμ + 1 = 0."""
    if z_mu <= 0.0:
        raise DomainError("the mixing parameter needs Zmu > 0")
    g = math.sqrt(kappa * kappa - z_mu * z_mu)
    return (g - kappa) / z_mu


def mix(f1: Any, f2: Any, X: float) -> Tuple[Any, Any]:
    """(f1, f2) → (g1, g2) = (f1 + X f2, f2 + X f1)."""
    return f1 + X * f2, f2 + X * f1


def unmix(g1: Any, g2: Any, X: float) -> Tuple[Any, Any]:
    det = 1.0 - X * X
    if det == 0.0:
        raise SingularMixingError("X^2 = 1: mixing map is not invertible")
    return (g1 - X * g2) / det, (g2 - X * g1) / det


@dataclass
class DiracRadialPair:
    """Both Dirac radial components on a grid, in the u = r·f form."""

    g2: RadialSolution
    r: np.ndarray
    g1_values: np.ndarray
    g2_values: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    mixing_X: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.g2.label,
            "mixing_X": self.mixing_X,
            "r": self.r.tolist(),
            "f1": self.f1.tolist(),
            "f2": self.f2.tolist(),
        }


def _dirac_components(
    sol: RadialSolution, w: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(g1, g2, f1, f2) as u-form samples on w."""
    if sol.kind is not RadialKind.DIRAC_G2 or sol.kappa is None:
        raise InvalidParameterError("needs a Dirac g2 solution")
    g = sol.gamma
    x = sol.energy
    denominator = 1.0 - x * sol.kappa / g
    if abs(denominator) < 1e-12:
        raise SingularMixingError(
            f"{sol.label}: prefactor 1 - E*kappa/(gamma*mc^2) vanishes"
        )
    u, du = _profile_raw(sol, w, with_derivative=True)
    assert du is not None
    rotate = np.conj(sol.phase)
    u, du = (u * rotate).real, (du * rotate).real

    ct = _cotangent(w, sol.space)
    g2 = u
    g1 = (math.sqrt(sol.eta) * (du - g * ct * u) + (sol.z_mu / g) * x * u) / denominator
    X = mixing_x(sol.kappa, sol.z_mu)
    f1, f2 = unmix(g1, g2, X)
    if sol.norm is not None:
        g1, g2, f1, f2 = (v * sol.norm for v in (g1, g2, f1, f2))
    return g1, g2, f1, f2


def radial_dirac(solution: RadialSolution, r: Any) -> DiracRadialPair:
    """g2 from the closed form, g1 from its analytic derivative, f1/f2 by unmixing."""
    w = _to_compact(solution, r)
    g1, g2, f1, f2 = _dirac_components(solution, w)
    assert solution.kappa is not None
    return DiracRadialPair(
        g2=solution,
        r=np.asarray(r, dtype=float),
        g1_values=g1,
        g2_values=g2,
        f1=f1,
        f2=f2,
        mixing_X=mixing_x(solution.kappa, solution.z_mu),
    )


def dirac_coupled_residual(
    solution: RadialSolution, w: Any, step: float = 1e-3
) -> float:
    """
    Largest relative residual of the first-order pair

        f1' = −κ ct f1 + (Zμ ct + (x + 1)/√η) f2
        f2' =  κ ct f2 − (Zμ ct + (x − 1)/√η) f1

    on the compact coordinate, with derivatives from a five-point stencil.
    """
    assert solution.kappa is not None
    w = np.asarray(w, dtype=float)
    h = step * np.minimum(w, 1.0)
    samples = [_dirac_components(solution, w + k * h) for k in (-2, -1, 1, 2)]

    def stencil(index: int) -> np.ndarray:
        m2, m1, p1, p2 = (s[index] for s in samples)
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h)

    _, _, f1, f2 = _dirac_components(solution, w)
    df1, df2 = stencil(2), stencil(3)
    ct = _cotangent(w, solution.space)
    root_eta = math.sqrt(solution.eta)
    kappa, x, zm = solution.kappa, solution.energy, solution.z_mu

    rhs1 = -kappa * ct * f1 + (zm * ct + (x + 1.0) / root_eta) * f2
    rhs2 = kappa * ct * f2 - (zm * ct + (x - 1.0) / root_eta) * f1
    scale1 = np.abs(kappa * ct * f1) + np.abs((zm * ct + (x + 1.0) / root_eta) * f2)
    scale2 = np.abs(kappa * ct * f2) + np.abs((zm * ct + (x - 1.0) / root_eta) * f1)
    res1 = np.abs(df1 - rhs1) / np.maximum(scale1, np.finfo(float).tiny)
    res2 = np.abs(df2 - rhs2) / np.maximum(scale2, np.finfo(float).tiny)
    return float(max(res1.max(), res2.max()))


# ---------------------------------------------------------------------------
# Normalization, overlaps, nodes
# ---------------------------------------------------------------------------


def _density(sol: RadialSolution, w: np.ndarray) -> np.ndarray:
    if sol.kind is RadialKind.KG:
        u = _scaled_u(sol, w)
        return u * u
    _, _, f1, f2 = _dirac_components(sol, w)
    return f1 * f1 + f2 * f2


def _integrate(
    func: Any,
    lo: float,
    hi: float,
    peaks: Sequence[float],
    what: str,
    epsabs: float = 0.0,
) -> float:
    inside = sorted({p for p in peaks if lo < p < hi})
    points = inside or None
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, abserr = quad(
                func,
                lo,
                hi,
                points=points,
                limit=QUAD_LIMIT,
                epsabs=epsabs,
                epsrel=QUAD_EPSREL,
            )
        except IntegrationWarning as e:
            raise NonIntegrableError(f"{what}: quadrature did not converge ({e})")
    if not math.isfinite(value):
        raise NonIntegrableError(f"{what}: non-finite integral")
    logger.debug(f"{what}: integral={value:.12e} +/- {abserr:.2e}")
    return value


def norm_integral(solution: RadialSolution) -> float:
    """∫ |ψ|² r² dr/√(1 + sλr²) of the samples as currently scaled (natural units)."""
    lo, hi = solution.w_range()
    def density(w: float) -> float:
        return float(_density(solution, np.array([w]))[0])

    value = _integrate(density, lo, hi, (solution.w_ref,), solution.label or "norm")
    return value / math.sqrt(solution.eta)


def normalize(solution: RadialSolution) -> float:
    """Constant c that makes the deformed-measure norm of c·ψ equal to one."""
    if not solution.is_normalizable:
        raise NonIntegrableError(
            f"{solution.label}: non-normalizable exponent branch"
        )
    unscaled = replace(solution, norm=None)
    integral = norm_integral(unscaled)
    if integral <= 0.0:
        raise NonIntegrableError(f"{solution.label}: vanishing norm integral")
    return 1.0 / math.sqrt(integral)


def normalized(solution: RadialSolution) -> RadialSolution:
    return replace(solution, norm=normalize(solution))


def _same_partial_wave(first: RadialSolution, second: RadialSolution, what: str) -> None:
    if first.space is not second.space or first.eta != second.eta:
        raise InvalidParameterError(f"{what} needs the same deformation")
    if first.kind is not RadialKind.KG or second.kind is not RadialKind.KG:
        raise InvalidParameterError(f"{what} is defined for Klein-Gordon states")
    if first.z_mu != second.z_mu or first.d != second.d:
        raise InvalidParameterError(f"{what} needs one charge and one partial wave")


def _product_integral(
    one: RadialSolution,
    two: RadialSolution,
    weight: Callable[[float], float],
    what: str,
    epsabs: float = 0.0,
) -> float:
    """∫ weight(w)·u₁u₂ dw over the shorter of the two integration ranges."""
    hi = min(one.w_range()[1], two.w_range()[1])

    def integrand(w: float) -> float:
        grid = np.array([w])
        return weight(w) * float(_scaled_u(one, grid)[0] * _scaled_u(two, grid)[0])

    return _integrate(integrand, 0.0, hi, (one.w_ref, two.w_ref), what, epsabs)


def overlap(first: RadialSolution, second: RadialSolution) -> float:
    """
    ⟨first|second⟩ under the deformed measure, both normalized first.

    Levels of one partial wave are only nearly orthogonal under this measure
    because the Klein-Gordon potential depends on the energy; see
    `kg_inner_product` for the exact counterpart.

    Raises:
        InvalidParameterError: If the states differ in deformation, charge or
            partial wave, or are not Klein-Gordon states
    """
    _same_partial_wave(first, second, "overlap")
    one = first if first.norm is not None else normalized(first)
    two = second if second.norm is not None else normalized(second)
    root_eta = math.sqrt(one.eta)
    # Normalized states have ∫u² dw = √η.
    value = _product_integral(
        one, two, lambda w: 1.0, "overlap", epsabs=OVERLAP_EPSABS * root_eta
    )
    return value / root_eta


def coulomb_potential(solution: RadialSolution, w: Any) -> Any:
    """V = −Zμ√(1 + sλr²)/r in units of mc², on the compact coordinate."""
    return -solution.z_mu * math.sqrt(solution.eta) * _cotangent(np.asarray(w), solution.space)


def kg_inner_product(first: RadialSolution, second: RadialSolution) -> float:
    """
    Klein-Gordon inner product of two levels of one partial wave,

        ∫ ((x₁ + x₂)/2 − V)·u₁u₂ dw / √(N₁N₂),   N_i = ∫ (x_i − V)·u_i² dw,

    the conserved product of the energy-dependent equation. Distinct levels
    are orthogonal under it and every level has unit product with itself.

    Args:
        first: Klein-Gordon radial solution
        second: Solution of the same partial wave, charge and deformation

    Returns:
        The normalized inner product

    Raises:
        InvalidParameterError: If the states do not share a partial wave
        NonIntegrableError: If a weighted norm is not positive
    """
    _same_partial_wave(first, second, "kg_inner_product")

    def weight(energy: float) -> Callable[[float], float]:
        return lambda w: energy - float(coulomb_potential(first, w))

    n_one = _product_integral(first, first, weight(first.energy), "kg norm")
    n_two = _product_integral(second, second, weight(second.energy), "kg norm")
    if n_one <= 0.0 or n_two <= 0.0:
        raise NonIntegrableError("kg_inner_product: weighted norm is not positive")
    scale = math.sqrt(n_one * n_two)
    mean = 0.5 * (first.energy + second.energy)
    value = _product_integral(
        first, second, weight(mean), "kg inner product", epsabs=OVERLAP_EPSABS * scale
    )
    return value / scale


def patch_weight(solution: RadialSolution) -> float:
    """
    Share of the AdS norm inside the physical patch r < 1/√λ (w < π/2).

    Always 1 in dS.
    """
    if solution.space is SpaceKind.DE_SITTER:
        return 1.0
    lo, hi = solution.w_range()
    if hi <= 0.5 * math.pi:
        return 1.0

    def density(w: float) -> float:
        return float(_density(solution, np.array([w]))[0])

    peaks = (solution.w_ref,)
    inner = _integrate(density, lo, 0.5 * math.pi, peaks, "patch weight")
    outer = _integrate(density, 0.5 * math.pi, hi, peaks, "patch weight")
    return inner / (inner + outer)


def count_nodes(values: Any, rel_floor: float = 1e-10) -> int:
    """Sign changes of a sampled function, ignoring samples below rel_floor·max."""
    v = np.asarray(values, dtype=float)
    big = np.abs(v) > rel_floor * np.max(np.abs(v))
    signs = np.sign(v[big])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def node_count(solution: RadialSolution, samples: int = 20000) -> int:
    """Nodes of the radial function (g2 for Dirac); AdS counts on the continued domain."""
    lo, hi = solution.w_range()
    w = np.linspace(lo, hi, samples + 2)[1:-1]
    return count_nodes(_scaled_u(solution, w))


def sample_profile(
    solution: RadialSolution, samples: int = 400
) -> Dict[str, np.ndarray]:
    """
    r (unit system length), y, ψ, the measure weight |ψ|² r²/√(1 + sλr²) and
    the cumulative norm from the origin.

    In dS the grid ends on the outer edge of the integration range, so the
    cumulative column reaches 1. In AdS it stops at the edge of the physical
    patch and the cumulative column reaches `patch_weight`.
    """
    lo, hi = solution.w_range()
    if solution.space is SpaceKind.ANTI_DE_SITTER:
        hi = min(hi, 0.5 * math.pi) * (1.0 - 1e-10)
    w = np.linspace(lo, hi, samples + 1)[1:]
    root_eta = math.sqrt(solution.eta)
    if solution.space is SpaceKind.DE_SITTER:
        r_nat = np.sinh(w) / root_eta
        metric = np.cosh(w)
    else:
        r_nat = np.sin(w) / root_eta
        metric = np.cos(w)
    y, _, _, _, _ = _log_terms(w, solution.space, solution.eta)
    if solution.kind is RadialKind.KG:
        psi = _scaled_u(solution, w) / r_nat
        weight = psi * psi * r_nat ** 2 / metric
    else:
        _, _, f1, f2 = _dirac_components(solution, w)
        psi = f2 / r_nat
        weight = (f1 * f1 + f2 * f2) / metric
    return {
        "r": r_nat * solution.compton_length,
        "y": y.real if solution.space is SpaceKind.DE_SITTER else y.imag,
        "value": psi,
        "weight": weight,
        "cumulative": _cumulative_norm(solution, w),
    }


def _cumulative_norm(solution: RadialSolution, w: np.ndarray) -> np.ndarray:
    def density(point: float) -> float:
        return float(_density(solution, np.array([point]))[0])

    edges = np.concatenate([[0.0], w])
    pieces = [
        _integrate(density, float(a), float(b), (), "cumulative norm")
        for a, b in zip(edges[:-1], edges[1:])
    ]
    return np.cumsum(pieces) / math.sqrt(solution.eta)
