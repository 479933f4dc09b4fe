"""
Run configuration and report builders shared by the CLI and the web API.

A report is a list of flat records plus header metadata and footer lines;
`serializer.RecordSerializer` turns it into CSV or JSON.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple, Union

from src.eup_coulomb.dirac import (
    DiracSpectrumInputs,
    energy_dirac,
    energy_dirac_first_order,
    epsilon_dirac,
    table1,
)
from src.eup_coulomb.exceptions import (
    ComplexExponentError,
    ConfigError,
    InvalidParameterError,
    NoRootError,
    SpectrumError,
)
from src.eup_coulomb.kg import (
    KGSpectrumInputs,
    energy_kg,
    energy_kg_first_order,
    epsilon_kg,
)
from src.eup_coulomb.models import (
    DeformationParams,
    DiracState,
    EnergyResult,
    KGState,
    SpaceKind,
    UnitSystem,
    Validity,
    make_deformation,
    make_deformation_from_eta,
)
from src.eup_coulomb.oracle import RadialODE, shoot_eigenvalue
from src.eup_coulomb.quantize import QuantizationProblem, solve
from src.eup_coulomb.reference import published_by_label
from src.eup_coulomb.serializer import RecordSerializer
from src.eup_coulomb.wavefn import (
    dirac_solution,
    kg_solution,
    node_count,
    normalized,
    patch_weight,
    sample_profile,
)

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "table", "scan", "wavefunction", "verify")

# Decade ladder used when a scan does not name its deformation values.
DEFAULT_SCAN_ETAS = [0.0, 1e-4, 1e-3, 1e-2]

ROOTFIND_GRID_Z = [1, 5, 20]
ROOTFIND_GRID_ETA = [1e-8, 1e-4, 1e-2]
ROOTFIND_GRID_N_MAX = 6
SHOOT_GRID_Z = [1, 5, 20]
SHOOT_GRID_ETA = [1e-4, 1e-2]
SHOOT_GRID_N_MAX = 2

ROOTFIND_THRESHOLD = 1e-9
SHOOT_THRESHOLD = 1e-6
IDENTITY_THRESHOLD = 1e-12

Spectrum = Union[KGSpectrumInputs, DiracSpectrumInputs]


@dataclass
class RunConfig:
    """Resolved parameters of one run: defaults, then config file, then flags."""

    command: str = "spectrum"
    eq: str = "kg"
    space: str = "ds"
    Z: int = 1
    N: int = 1
    l: Optional[int] = None
    j: Optional[float] = None
    lam: Optional[float] = None
    sqrt_lambda_per_m: Optional[float] = None
    eta: Optional[float] = None
    units: str = "natural"
    format: str = "csv"
    out: Optional[str] = None
    scan_var: str = "N"
    n_max: int = 10
    z_min: int = 1
    z_max: int = 140
    etas: Optional[List[float]] = None
    method: str = "rootfind"
    samples: int = 400
    verbose: bool = False

    @classmethod
    def from_sources(
        cls,
        command: str,
        config_path: Optional[str] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> "RunConfig":
        """
        Resolve a run from defaults, an optional JSON file and explicit overrides.

        Args:
            command: Subcommand name
            config_path: JSON file with hyphen or underscore keys
            overrides: Values from flags or query strings; None entries are skipped

        Returns:
            Validated RunConfig

        Raises:
            ConfigError: If a key is unknown, the file is unreadable or a value
                is out of range
        """
        values: Dict[str, Any] = {"command": command}
        if config_path:
            values.update(load_config_file(config_path))
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        config = cls(**values)
        config.validate()
        return config

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command '{self.command}'")
        if self.eq not in ("kg", "dirac"):
            raise ConfigError(f"--eq must be kg or dirac (got {self.eq})")
        if self.space not in ("ds", "ads", "both"):
            raise ConfigError(f"--space must be ds, ads or both (got {self.space})")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"--format must be csv or json (got {self.format})")
        given = [v for v in (self.lam, self.sqrt_lambda_per_m, self.eta) if v is not None]
        if len(given) > 1:
            raise ConfigError("give only one of --lambda, --sqrt-lambda-per-m, --eta")

    @property
    def unit_system(self) -> UnitSystem:
        return UnitSystem.from_string(self.units)

    @property
    def spaces(self) -> List[SpaceKind]:
        if self.space == "both":
            return [SpaceKind.DE_SITTER, SpaceKind.ANTI_DE_SITTER]
        return [SpaceKind.from_string(self.space)]

    def deformation(self, space: SpaceKind, eta: Optional[float] = None) -> DeformationParams:
        units = self.unit_system
        if eta is not None:
            return make_deformation_from_eta(space, eta, units)
        if self.eta is not None:
            return make_deformation_from_eta(space, self.eta, units)
        if self.sqrt_lambda_per_m is not None:
            strength = UnitSystem.physical().eta_from_lambda(self.sqrt_lambda_per_m ** 2)
            return make_deformation_from_eta(space, strength, units)
        if self.lam is not None:
            return make_deformation(space, self.lam, units)
        return make_deformation(space, 0.0, units)

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if k not in ("out", "verbose")}


def load_config_file(path: str) -> Dict[str, Any]:
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    # Flag spellings are accepted as keys too.
    return {key.replace("-", "_"): value for key, value in data.items()}


@dataclass
class Report:
    command: str
    records: List[Dict[str, Any]]
    columns: Optional[List[str]] = None
    header: Dict[str, Any] = field(default_factory=dict)
    footer: List[str] = field(default_factory=list)
    passed: bool = True

    def render(self, fmt: str, config: RunConfig) -> str:
        serializer = RecordSerializer()
        metadata = serializer.metadata(self.command, config.to_dict(), self.header)
        return serializer.render(fmt, self.records, metadata, self.columns, self.footer)


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------


def dirac_state_for(N: int, j: Optional[float], l: Optional[int]) -> DiracState:
    """κ from (l, j) when both are given, otherwise the j = l + 1/2 branch."""
    j = 0.5 if j is None else float(j)
    if l is None:
        return DiracState.from_kappa(N, -int(round(j + 0.5)))
    return DiracState.from_l_j(N, l, j)


def spectrum_inputs(
    config: RunConfig, deformation: DeformationParams, Z: Optional[int] = None, N: Optional[int] = None
) -> Spectrum:
    Z = config.Z if Z is None else Z
    N = config.N if N is None else N
    units = config.unit_system
    if config.eq == "kg":
        return KGSpectrumInputs(KGState(N, config.l or 0), Z, deformation, units)
    return DiracSpectrumInputs(dirac_state_for(N, config.j, config.l), Z, deformation, units)


def _closed_form(inputs: Spectrum) -> EnergyResult:
    if isinstance(inputs, KGSpectrumInputs):
        return energy_kg(inputs)
    return energy_dirac(inputs)


def _epsilon(inputs: Spectrum) -> float:
    if isinstance(inputs, KGSpectrumInputs):
        return epsilon_kg(inputs.state, inputs.z_mu, inputs.units)
    return epsilon_dirac(inputs.state, inputs.z_mu, inputs.units)


def _first_order(inputs: Spectrum) -> float:
    if isinstance(inputs, KGSpectrumInputs):
        return energy_kg_first_order(inputs)
    return energy_dirac_first_order(inputs)


def _gate_message(inputs: Spectrum) -> str:
    if isinstance(inputs, KGSpectrumInputs):
        return (
            f"l+1/2 > Zmu violated: l={inputs.state.l}, Z={inputs.Z}, "
            f"Zmu={inputs.z_mu:.6f}"
        )
    return (
        f"j+1/2 >= Zmu violated: j={inputs.state.j}, Z={inputs.Z}, "
        f"Zmu={inputs.z_mu:.6f}"
    )


def _state_fields(inputs: Spectrum) -> Dict[str, Any]:
    state = inputs.state
    if isinstance(state, KGState):
        return {"N": state.N, "l": state.l, "j": None, "kappa": None, "label": state.label}
    return {
        "N": state.N,
        "l": state.l,
        "j": state.j,
        "kappa": state.kappa,
        "label": state.label,
    }


def _energy_record(inputs: Spectrum, config: RunConfig) -> Dict[str, Any]:
    result = _closed_form(inputs)
    record: Dict[str, Any] = {"eq": config.eq, "space": result.branch.value, "Z": inputs.Z}
    record.update(_state_fields(inputs))
    record["eta"] = inputs.deformation.eta
    record["validity"] = result.validity.value
    if result.validity is Validity.COMPLEX_EXPONENT:
        record.update({"E": None, "epsilon": None, "E_first_order": None, "ratio": None})
        return record
    eps = _epsilon(inputs)
    record["E"] = result.value
    record["epsilon"] = eps
    record["E_first_order"] = _first_order(inputs)
    record["ratio"] = result.value / eps if result.value is not None and eps else None
    return record


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def build_spectrum(config: RunConfig) -> Report:
    """Closed-form level of one state on each requested branch."""
    records = []
    for space in config.spaces:
        inputs = spectrum_inputs(config, config.deformation(space))
        if _closed_form(inputs).validity is Validity.COMPLEX_EXPONENT:
            raise ComplexExponentError(_gate_message(inputs))
        record = _energy_record(inputs, config)
        mc2 = inputs.units.mc2
        record["binding"] = record["E"] - mc2 if record["E"] is not None else None
        records.append(record)
    return Report(command="spectrum", records=records)


def build_table(config: RunConfig) -> Report:
    units = UnitSystem.physical()
    deformation = None
    if any(v is not None for v in (config.lam, config.sqrt_lambda_per_m, config.eta)):
        deformation = replace(config, units="physical").deformation(SpaceKind.DE_SITTER)
    published = published_by_label()
    records = []
    for row in table1(units, deformation):
        ref = published[row.label]
        records.append(
            {
                "N": row.N,
                "l": row.l,
                "j": row.j,
                "label": row.label,
                "epsilon_eV": row.epsilon,
                "delta_abs_eV": row.delta_eps_abs,
                "published_epsilon_eV": ref.epsilon,
                "published_delta_abs_eV": ref.delta_abs,
                "epsilon_diff_eV": row.epsilon - ref.epsilon,
            }
        )
    return Report(command="table", records=records)


def _scan_points(config: RunConfig) -> Iterator[Tuple[int, int]]:
    """(Z, N) pairs of the scan in input order."""
    if config.scan_var == "N":
        if config.eq == "kg":
            n_min = (config.l or 0) + 1
        else:
            n_min = int(round((0.5 if config.j is None else config.j) + 0.5))
        for N in range(n_min, config.n_max + 1):
            yield config.Z, N
    elif config.scan_var == "Z":
        for Z in range(config.z_min, config.z_max + 1):
            yield Z, config.N
    else:
        raise ConfigError(f"--scan-var must be N or Z (got {config.scan_var})")


def build_scan(config: RunConfig) -> Report:
    """Invalid points are kept and flagged so that accumulation points stay visible."""
    points = list(_scan_points(config))
    etas = config.etas if config.etas is not None else DEFAULT_SCAN_ETAS
    if not points or not etas:
        raise InvalidParameterError("empty scan range")
    records = []
    for Z, N in points:
        for eta in etas:
            for space in config.spaces:
                inputs = spectrum_inputs(config, config.deformation(space, eta), Z=Z, N=N)
                records.append(_energy_record(inputs, config))
    logger.info(f"scan over {config.scan_var}: {len(records)} records")
    return Report(command="scan", records=records)


def build_wavefunction(config: RunConfig) -> Report:
    """
    Normalized radial profile of one state.

    Args:
        config: Run configuration; the first requested space is used

    Returns:
        Report with one record per radius, the node and norm checks in the
        footer and the share of the norm inside the physical patch

    Raises:
        ComplexExponentError: If the state is past the charge gate
        NonIntegrableError: If the level has no normalizable solution
    """
    space = config.spaces[0]
    inputs = spectrum_inputs(config, config.deformation(space))
    if _closed_form(inputs).validity is Validity.COMPLEX_EXPONENT:
        raise ComplexExponentError(_gate_message(inputs))
    if isinstance(inputs, KGSpectrumInputs):
        solution = normalized(kg_solution(inputs))
    else:
        solution = normalized(dirac_solution(inputs))

    profile = sample_profile(solution, config.samples)
    records = [
        {
            "r": float(profile["r"][i]),
            "y": float(profile["y"][i]),
            "value": float(profile["value"][i]),
            "weight": float(profile["weight"][i]),
            "cumulative": float(profile["cumulative"][i]),
        }
        for i in range(len(profile["r"]))
    ]
    nodes = node_count(solution)
    inside = patch_weight(solution)
    footer = [
        f"nodes: {nodes} (expected {solution.n})",
        f"norm_integral: {format(float(profile['cumulative'][-1]), '.17g')}",
        f"patch_weight: {format(inside, '.17g')}",
    ]
    return Report(
        command="wavefunction",
        records=records,
        header={
            "state": solution.label,
            "energy_over_mc2": solution.energy,
            "exponent": solution.exponent.value,
            "normalization": solution.norm,
            "log_scale": solution.log_scale,
            "patch_weight": inside,
        },
        footer=footer,
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def kg_states(n_max: int) -> Iterator[KGState]:
    for N in range(1, n_max + 1):
        for l in range(N):
            yield KGState(N, l)


def dirac_states(n_max: int, negative_kappa_only: bool = False) -> Iterator[DiracState]:
    for N in range(1, n_max + 1):
        for l in range(N):
            yield DiracState.from_l_j(N, l, l + 0.5)
            if l >= 1 and not negative_kappa_only:
                yield DiracState.from_l_j(N, l, l - 0.5)


def _relative(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0.0 else abs(a - b)


def _case_record(method: str, inputs: Spectrum) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "method": method,
        "eq": "kg" if isinstance(inputs, KGSpectrumInputs) else "dirac",
        "space": inputs.deformation.space.value,
        "Z": inputs.Z,
        "eta": inputs.deformation.eta,
    }
    record.update(_state_fields(inputs))
    return record


def _all_inputs(
    n_max: int, z_values: List[int], etas: List[float], spaces: List[SpaceKind], shoot: bool
) -> Iterator[Spectrum]:
    units = UnitSystem.natural()
    for Z in z_values:
        for eta in etas:
            for space in spaces:
                deformation = make_deformation_from_eta(space, eta, units)
                for kg_state in kg_states(n_max):
                    yield KGSpectrumInputs(kg_state, Z, deformation, units)
                for dirac_state in dirac_states(n_max, negative_kappa_only=shoot):
                    yield DiracSpectrumInputs(dirac_state, Z, deformation, units)


def verify_rootfind(spaces: List[SpaceKind]) -> List[Dict[str, Any]]:
    records = []
    for inputs in _all_inputs(
        ROOTFIND_GRID_N_MAX, ROOTFIND_GRID_Z, ROOTFIND_GRID_ETA, spaces, shoot=False
    ):
        closed = _closed_form(inputs)
        if closed.validity is Validity.COMPLEX_EXPONENT:
            continue
        record = _case_record("rootfind", inputs)
        problem = (
            QuantizationProblem.from_kg(inputs)
            if isinstance(inputs, KGSpectrumInputs)
            else QuantizationProblem.from_dirac(inputs)
        )
        try:
            numeric = solve(problem)
        except NoRootError:
            # A dS level with a negative radicand has no root either.
            expected = closed.validity is Validity.UNPHYSICAL_RADICAND
            record.update(
                {"closed": None, "numeric": None, "rel_error": None, "passed": expected}
            )
            records.append(record)
            continue
        except SpectrumError as e:
            logger.warning(f"root finding failed for {inputs.state.label}: {e}")
            record.update(
                {
                    "closed": closed.value,
                    "numeric": None,
                    "rel_error": None,
                    "error": str(e),
                    "passed": False,
                }
            )
            records.append(record)
            continue
        if closed.value is None:
            record.update(
                {"closed": None, "numeric": numeric.value, "rel_error": None, "passed": False}
            )
            records.append(record)
            continue
        assert numeric.value is not None
        error = _relative(numeric.value, closed.value)
        record.update(
            {
                "closed": closed.value,
                "numeric": numeric.value,
                "rel_error": error,
                "exponent": numeric.exponent.value if numeric.exponent else None,
                "passed": error <= ROOTFIND_THRESHOLD,
            }
        )
        records.append(record)
    return records


def verify_shoot() -> List[Dict[str, Any]]:
    records = []
    for inputs in _all_inputs(
        SHOOT_GRID_N_MAX,
        SHOOT_GRID_Z,
        SHOOT_GRID_ETA,
        [SpaceKind.ANTI_DE_SITTER],
        shoot=True,
    ):
        closed = _closed_form(inputs)
        if not closed.is_ok or closed.value is None:
            continue
        record = _case_record("shoot", inputs)
        ode = (
            RadialODE.from_kg(inputs)
            if isinstance(inputs, KGSpectrumInputs)
            else RadialODE.from_dirac(inputs)
        )
        try:
            shot = shoot_eigenvalue(ode, inputs.state.n)
        except SpectrumError as e:
            logger.warning(f"shooting failed for {inputs.state.label}: {e}")
            record.update(
                {"closed": closed.value, "numeric": None, "error": str(e), "passed": False}
            )
            records.append(record)
            continue
        assert shot.value is not None
        error = _relative(shot.value, closed.value)
        record.update(
            {
                "closed": closed.value,
                "numeric": shot.value,
                "rel_error": error,
                "matching_residual": shot.matching_residual,
                "passed": error <= SHOOT_THRESHOLD,
            }
        )
        records.append(record)
    return records


def verify_identity() -> List[Dict[str, Any]]:
    """E_dS² + E_AdS² = 2ε² on the root-finding grid."""
    records = []
    for inputs in _all_inputs(
        ROOTFIND_GRID_N_MAX,
        ROOTFIND_GRID_Z,
        ROOTFIND_GRID_ETA,
        [SpaceKind.DE_SITTER],
        shoot=False,
    ):
        ds = _closed_form(inputs)
        if not ds.is_ok or ds.value is None:
            continue
        ads_deformation = replace(inputs.deformation, space=SpaceKind.ANTI_DE_SITTER)
        ads = _closed_form(replace(inputs, deformation=ads_deformation))
        if not ads.is_ok or ads.value is None:
            continue
        eps = _epsilon(inputs)
        error = _relative(ds.value ** 2 + ads.value ** 2, 2.0 * eps ** 2)
        record = _case_record("identity", inputs)
        record.update(
            {
                "closed": 2.0 * eps ** 2,
                "numeric": ds.value ** 2 + ads.value ** 2,
                "rel_error": error,
                "passed": error <= IDENTITY_THRESHOLD,
            }
        )
        records.append(record)
    return records


def build_verify(config: RunConfig) -> Report:
    """
    Cross-checks of the closed forms; a failing case is recorded, not raised.

    Raises:
        ConfigError: If the method is unknown
    """
    methods = (
        ["rootfind", "identity", "shoot"] if config.method == "all" else [config.method]
    )
    records: List[Dict[str, Any]] = []
    for method in methods:
        if method == "rootfind":
            records.extend(
                verify_rootfind([SpaceKind.DE_SITTER, SpaceKind.ANTI_DE_SITTER])
            )
        elif method == "shoot":
            records.extend(verify_shoot())
        elif method == "identity":
            records.extend(verify_identity())
        else:
            raise ConfigError(f"Unknown verification method '{method}'")

    failures = [r for r in records if not r["passed"]]
    worst = max(
        (r["rel_error"] for r in records if r.get("rel_error") is not None), default=0.0
    )
    summary = {
        "cases": len(records),
        "failures": len(failures),
        "max_rel_error": worst,
        "passed": not failures,
    }
    logger.info(f"verify {methods}: {summary}")
    columns = [
        "method", "eq", "space", "Z", "N", "l", "j", "kappa", "label", "eta",
        "closed", "numeric", "rel_error", "passed",
    ]
    return Report(
        command="verify",
        records=records,
        columns=columns,
        header={"summary": summary},
        footer=[f"cases: {len(records)}", f"failures: {len(failures)}"],
        passed=not failures,
    )


BUILDERS = {
    "spectrum": build_spectrum,
    "table": build_table,
    "scan": build_scan,
    "wavefunction": build_wavefunction,
    "verify": build_verify,
}


def run_report(config: RunConfig) -> Report:
    """Dispatch to the builder for config.command."""
    return BUILDERS[config.command](config)
