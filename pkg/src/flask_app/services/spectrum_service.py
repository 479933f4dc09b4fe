"""
Service layer between the HTTP routes and the report builders.
"""

import logging
from typing import Any, Dict, Mapping, Optional

from src.eup_coulomb.reports import Report, RunConfig, run_report
from src.eup_coulomb.serializer import RecordSerializer

logger = logging.getLogger(__name__)

INT_FIELDS = ("Z", "N", "l", "n_max", "z_min", "z_max", "samples")
FLOAT_FIELDS = ("j", "lam", "sqrt_lambda_per_m", "eta")
STR_FIELDS = ("eq", "space", "units", "scan_var", "method")

# Query-string spellings that differ from the config field names.
ALIASES = {"lambda": "lam", "sqrt-lambda-per-m": "sqrt_lambda_per_m", "scan-var": "scan_var"}

# Verification grids are too heavy for a request; the CLI runs them.
WEB_COMMANDS = ("spectrum", "table", "scan", "wavefunction")
MAX_WEB_SAMPLES = 5000


class SpectrumService:
    """Builds reports for web requests."""

    def __init__(self, max_samples: int = MAX_WEB_SAMPLES):
        self.max_samples = max_samples
        self.serializer = RecordSerializer()

    def parse_args(self, args: Mapping[str, Any]) -> Dict[str, Any]:
        """
        Convert query-string values to typed config overrides.

        Raises:
            ValueError: If a value does not parse as the field's type
        """
        overrides: Dict[str, Any] = {}
        for raw_key, raw_value in args.items():
            key = ALIASES.get(raw_key, raw_key)
            if raw_value in (None, ""):
                continue
            if key in INT_FIELDS:
                overrides[key] = int(raw_value)
            elif key in FLOAT_FIELDS:
                overrides[key] = float(raw_value)
            elif key in STR_FIELDS:
                overrides[key] = str(raw_value)
            elif key == "etas":
                overrides[key] = [float(v) for v in str(raw_value).split(",") if v]
            else:
                raise ValueError(f"Unknown parameter '{raw_key}'")
        if overrides.get("samples", 0) > self.max_samples:
            raise ValueError(f"samples must be <= {self.max_samples}")
        return overrides

    def build(self, command: str, args: Mapping[str, Any]) -> Dict[str, Any]:
        """
        Build one report from query-string arguments.

        Args:
            command: Report name, one of WEB_COMMANDS
            args: Raw query-string values

        Returns:
            Dict with "metadata" and "records"

        Raises:
            ValueError: If the command or a parameter is unknown
            SpectrumError: If the configuration or the physics rejects the request
        """
        if command not in WEB_COMMANDS:
            raise ValueError(f"Unknown report '{command}'")
        config = RunConfig.from_sources(command, overrides=self.parse_args(args))
        report = run_report(config)
        logger.info(f"{command}: {len(report.records)} records")
        return self._payload(report, config)

    def _payload(self, report: Report, config: Optional[RunConfig]) -> Dict[str, Any]:
        metadata = self.serializer.metadata(
            report.command, config.to_dict() if config else {}, report.header
        )
        if report.footer:
            metadata["footer"] = list(report.footer)
        return {"metadata": metadata, "records": report.records}
