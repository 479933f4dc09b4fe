"""
Command-line entry point.

    eup-coulomb spectrum --eq dirac --space both --Z 1 --N 2 --l 1 --j 1.5 --eta 1e-4
    eup-coulomb table --format json
    eup-coulomb scan --scan-var Z --eq kg --l 0 --z-max 80
    eup-coulomb wavefunction --eq kg --space ads --N 3 --eta 1e-2
    eup-coulomb verify --method all

Exit codes: 0 success, 1 verification failure, 2 invalid input or no solution.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from src.eup_coulomb.exceptions import SpectrumError
from src.eup_coulomb.reports import RunConfig, run_report
from src.eup_coulomb.serializer import TOOL_NAME, TOOL_VERSION, RecordSerializer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ERROR = 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eq", choices=["kg", "dirac"], help="Wave equation (default kg)")
    p.add_argument("--space", choices=["ds", "ads", "both"], help="Deformation branch")
    p.add_argument("--Z", type=int, help="Nuclear charge")
    p.add_argument("--N", type=int, help="Principal quantum number")
    p.add_argument("--l", type=int, help="Orbital quantum number")
    p.add_argument("--j", type=float, help="Total angular momentum (Dirac)")
    strength = p.add_mutually_exclusive_group()
    strength.add_argument("--lambda", dest="lam", type=float, help="Deformation λ in the chosen units")
    strength.add_argument(
        "--sqrt-lambda-per-m", type=float, help="√λ in 1/m; implies physical constants for η"
    )
    strength.add_argument("--eta", type=float, help="Dimensionless η = λ(ħ/mc)²")
    p.add_argument("--units", choices=["natural", "physical"])
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", help="Write to this file instead of stdout")
    p.add_argument("--config", help="JSON file with defaults; flags override it")
    p.add_argument("-v", "--verbose", action="store_true", default=None)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Coulomb spectra of Klein-Gordon and Dirac particles under the "
        "extended uncertainty principle in (anti-)de Sitter space.",
    )
    p.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("spectrum", help="Closed-form level of one state")
    _add_common(sp)

    tb = sub.add_parser("table", help="Hydrogen-like Dirac levels with EUP corrections")
    _add_common(tb)

    sc = sub.add_parser("scan", help="Levels over N or Z for several deformations")
    _add_common(sc)
    sc.add_argument("--scan-var", choices=["N", "Z"])
    sc.add_argument("--n-max", type=int)
    sc.add_argument("--z-min", type=int)
    sc.add_argument("--z-max", type=int)
    sc.add_argument("--etas", type=float, nargs="+", help="Deformation values to scan")

    wf = sub.add_parser("wavefunction", help="Normalized radial profile of one state")
    _add_common(wf)
    wf.add_argument("--samples", type=int)

    vf = sub.add_parser("verify", help="Cross-check closed forms numerically")
    _add_common(vf)
    vf.add_argument("--method", choices=["rootfind", "shoot", "identity", "all"])

    return p


def _overrides(ns: argparse.Namespace) -> Dict[str, Any]:
    skip = {"cmd", "config"}
    return {k: v for k, v in vars(ns).items() if k not in skip and v is not None}


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        config = RunConfig.from_sources(ns.cmd, ns.config, _overrides(ns))
        _configure_logging(config.verbose)
        report = run_report(config)
        text = report.render(config.format, config)
    except SpectrumError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_ERROR

    if config.out:
        RecordSerializer().write(text, config.out)
        logger.info(f"wrote {len(report.records)} records to {config.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def main() -> None:
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\nAborted by user.", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
