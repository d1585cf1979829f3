"""Command-line surface: `python -m multspec <command> ...`."""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .config import ToleranceConfig, apply_tolerances, settings
from .errors import (
    DomainError,
    HypothesisError,
    MultspecError,
    ParseError,
    SpecError,
    SymbolConstructionError,
)
from .multipliers import fredholm_analysis, is_invertible, is_multiplier, peak_refutation_scan
from .render import dump_csv, dump_json, spectrum_payload, spectrum_svg, text_table
from .spaces import SpaceSpec, norm_report, parse_space
from .spectra import essential_spectrum, spectrum
from .symbols import Symbol, parse_constant, parse_symbol, to_series
from .verify import run_suites

logger = logging.getLogger(__name__)

Command = Literal[
    "norm", "spectrum", "ess-spectrum", "fredholm", "multiplier", "peak-scan", "verify", "serve"
]
OutputFormat = Literal["json", "csv", "svg", "text"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3

_NEEDS_SYMBOL = {"norm", "spectrum", "ess-spectrum", "fredholm", "multiplier", "peak-scan"}
_NEEDS_SPACE = {"norm", "ess-spectrum", "fredholm", "multiplier", "peak-scan"}


class RunConfig(BaseModel):
    """One CLI invocation; the same schema is accepted from --config files."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    command: Command
    symbol_text: Optional[str] = Field(default=None, alias="symbol")
    space: Optional[SpaceSpec] = None
    lam: Optional[str] = Field(default=None, alias="lambda")
    xi: Optional[str] = None
    kmax: int = Field(default=1024, ge=8)
    output_format: Optional[OutputFormat] = Field(default=None, alias="format")
    annulus: bool = False
    suites: List[str] = Field(default_factory=lambda: ["all"])
    svg_path: Optional[str] = Field(default=None, alias="svg")
    tolerances: Optional[ToleranceConfig] = None
    curve_samples: Optional[int] = Field(default=None, ge=64)
    angular_samples: Optional[int] = Field(default=None, ge=8)
    occupancy_cells: Optional[int] = Field(default=None, ge=8)
    ball_samples_log2: Optional[int] = Field(default=None, ge=8, le=22)
    host: str = "127.0.0.1"
    port: int = 8000
    schema_version: int = 1

    @field_validator("lam", "xi", mode="before")
    @classmethod
    def _number_as_text(cls, value):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return repr(float(value))
        return value

    @model_validator(mode="after")
    def _required(self) -> "RunConfig":
        if self.command in _NEEDS_SYMBOL and not self.symbol_text:
            raise ValueError(f"{self.command} needs a symbol (-u)")
        if self.command in _NEEDS_SPACE and self.space is None:
            raise ValueError(f"{self.command} needs --space")
        if self.command == "fredholm" and self.lam is None:
            raise ValueError("fredholm needs --lambda")
        if self.command == "peak-scan" and self.xi is None:
            raise ValueError("peak-scan needs --xi")
        return self

    @property
    def emit_format(self) -> OutputFormat:
        if self.output_format:
            return self.output_format
        if self.command == "peak-scan":
            return "csv"
        if self.command == "verify":
            return "text"
        return "json"


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge a --config JSON file with the flags given on the command line."""
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise SpecError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(data, dict):
            raise SpecError("config file must hold a JSON object")
    data["command"] = args.command
    flags = {
        "symbol": getattr(args, "symbol", None),
        "lambda": getattr(args, "lam", None),
        "xi": getattr(args, "xi", None),
        "kmax": getattr(args, "kmax", None),
        "format": getattr(args, "format", None),
        "svg": getattr(args, "svg", None),
        "host": getattr(args, "host", None),
        "port": getattr(args, "port", None),
    }
    if getattr(args, "space", None):
        try:
            flags["space"] = json.loads(args.space)
        except json.JSONDecodeError as e:
            raise SpecError(f"--space is not valid JSON: {e.msg}") from e
    if getattr(args, "annulus", False):
        flags["annulus"] = True
    if getattr(args, "suite", None):
        flags["suites"] = [args.suite]
    data.update({k: v for k, v in flags.items() if v is not None})
    if "space" in data and not isinstance(data["space"], SpaceSpec):
        data["space"] = parse_space(data["space"])
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise SpecError(f"invalid run config: {e.errors()[0].get('msg', e)}") from e


def _apply_overrides(config: RunConfig) -> None:
    if config.tolerances is not None:
        apply_tolerances(config.tolerances)
    for name in ("curve_samples", "angular_samples", "occupancy_cells", "ball_samples_log2"):
        value = getattr(config, name)
        if value is not None:
            setattr(settings, name, value)


def _symbol(config: RunConfig) -> Symbol:
    n = config.space.n if config.space is not None else None
    return parse_symbol(config.symbol_text, n)


def _k_grid(kmax: int) -> List[int]:
    return [2**j for j in range(3, int(math.log2(kmax)) + 1)]


def run(config: RunConfig) -> Tuple[int, str]:
    """Execute one command; returns the exit code and the artifact text."""
    _apply_overrides(config)
    fmt = config.emit_format
    command = config.command

    if command == "verify":
        results = run_suites(config.suites)
        passed = all(r.passed for r in results)
        if fmt == "json":
            text = dump_json("verify", results)
        else:
            summary = [(r.name, len(r.rows), "pass" if r.passed else "FAIL") for r in results]
            text = text_table(("suite", "rows", "status"), summary)
            for r in results:
                text += f"\n[{r.name}]\n" + text_table(r.header, r.rows)
        return (EXIT_OK if passed else EXIT_FAILED), text

    u = _symbol(config)
    if command == "norm":
        f = to_series(u) if u.dimension == 1 else u.to_multipoly()
        report = norm_report(config.space, f)
        return EXIT_OK, dump_json("norm", {"symbol": u.render(), "truncated": not getattr(f, "exact", True), "report": report})

    if command in ("spectrum", "ess-spectrum"):
        if command == "spectrum":
            est = spectrum(u)
        else:
            est = essential_spectrum(u, config.space, annulus=config.annulus)
        if config.svg_path:
            Path(config.svg_path).write_text(spectrum_svg(est), encoding="utf-8")
        if fmt == "svg":
            return EXIT_OK, spectrum_svg(est)
        return EXIT_OK, dump_json(est.kind, spectrum_payload(est))

    if command == "fredholm":
        report = fredholm_analysis(u, parse_constant(config.lam), config.space)
        return EXIT_OK, dump_json("fredholm", report)

    if command == "multiplier":
        report = is_multiplier(config.space, u)
        payload = {"report": report, "invertibility": is_invertible(u)}
        return EXIT_OK, dump_json("multiplier", payload)

    if command == "peak-scan":
        rows = peak_refutation_scan(u, parse_constant(config.xi), config.space, _k_grid(config.kmax))
        if fmt == "json":
            return EXIT_OK, dump_json("peak-scan", [{"k": k, "norm": value} for k, value in rows])
        return EXIT_OK, dump_csv(("k", "norm"), rows)

    raise SpecError(f"command {command} does not produce an artifact")


def _serve(config: RunConfig) -> int:
    import uvicorn

    uvicorn.run("multspec.main:app", host=config.host, port=config.port, log_level=settings.log_level.lower())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multspec", description="Spectra of multiplication operators.")
    parser.add_argument("--config", help="JSON file in the RunConfig schema")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_symbol(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-u", "--symbol", help="symbol, e.g. '(1+z)/2' or 'z1*z2'")
        p.add_argument("--space", required=False, help="space JSON, e.g. '{\"variant\":\"bloch\",\"alpha\":0.5}'")
        p.add_argument("--format", choices=["json", "csv", "svg", "text"])
        return p

    with_symbol("norm", "norm of the symbol in a space")
    spec = with_symbol("spectrum", "spectrum = closure of u(B_n)")
    spec.add_argument("--svg", help="also write an SVG drawing here")
    ess = with_symbol("ess-spectrum", "essential spectrum")
    ess.add_argument("--annulus", action="store_true", help="annulus-intersection mode (M(X) = H^inf)")
    ess.add_argument("--svg", help="also write an SVG drawing here")
    fred = with_symbol("fredholm", "Fredholm analysis of M_u - lambda")
    fred.add_argument("--lambda", dest="lam", help="complex number, e.g. 0.5+0.5i")
    with_symbol("multiplier", "multiplier membership and invertibility")
    scan = with_symbol("peak-scan", "norms of u times normalized peak functions")
    scan.add_argument("--xi", help="unimodular point, e.g. -1")
    scan.add_argument("--kmax", type=int, help="largest k (powers of two from 8)")

    ver = sub.add_parser("verify", help="run invariant suites")
    ver.add_argument("--suite", help="stirling, parseval, chu, exponents, decay, quotient, numerics, series, spectra, fredholm or all")
    ver.add_argument("--format", choices=["json", "text"])

    srv = sub.add_parser("serve", help="run the HTTP API")
    srv.add_argument("--host")
    srv.add_argument("--port", type=int)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = load_config(args)
        if config.command == "serve":
            return _serve(config)
        code, artifact = run(config)
    except HypothesisError as e:
        print(f"outside theorem hypotheses: {e} [{e.theorem}]", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (ParseError, SymbolConstructionError, SpecError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except MultspecError as e:
        logger.error("computation failed: %s", e)
        return EXIT_FAILED
    sys.stdout.write(artifact if artifact.endswith("\n") else artifact + "\n")
    return code
