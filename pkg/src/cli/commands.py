"""
Commands

One function per subcommand. Each runs its pipeline stage by stage and returns a
CommandResult holding the exit code and the JSON report. A failing stage is reported as
``{"stage", "reason", "message"}``; failures that encode a mathematical negative exit
with 2, operational failures with 1.
"""

import json
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, Optional, Tuple

import structlog

from src.cli.schemas import (
    MixedVolumeFile,
    ProblemFile,
    ResidueFile,
    load_document,
    write_polynomial,
)
from src.geometry.polytope import mixed_volume
from src.reconstruct.certificate import class_certificate
from src.reconstruct.interpolation import (
    InterpolationResult,
    characteristic_poly,
    choose_linear_form,
    interpolate,
)
from src.residues.residue import khovanskii_predict, residue_terms
from src.traces.analysis import affineness_test
from src.traces.problem import TraceProblem
from src.utils.config import Tolerances, get_config
from src.utils.exceptions import AbelTraceError, DegeneratePolytopeError, MissingClassSpec
from src.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2

RESIDUE_TOL = 1e-8


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    report: Dict[str, Any]

    def render(self) -> str:
        return json.dumps(self.report, sort_keys=True, indent=2)


@dataclass(frozen=True)
class Overrides:
    """Command-line tolerance flags; they win over the problem file."""

    fit_tol: Optional[float] = None
    grid_size: Optional[int] = None
    seed: Optional[int] = None
    continuation_steps: Optional[int] = None

    def apply(self, tolerances: Tolerances) -> Tolerances:
        return tolerances.override(
            fit_tol=self.fit_tol,
            grid_size=self.grid_size,
            seed=self.seed,
            continuation_steps=self.continuation_steps,
        )


class StageFailure(Exception):
    """A pipeline stage failed; wraps the original error."""

    def __init__(self, stage: str, error: Exception) -> None:
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error

    @property
    def negative(self) -> bool:
        return isinstance(self.error, AbelTraceError) and self.error.negative

    @property
    def reason(self) -> str:
        if isinstance(self.error, AbelTraceError):
            return self.error.reason
        return type(self.error).__name__


@contextmanager
def stage(name: str) -> Iterator[None]:
    try:
        yield
    except StageFailure:
        raise
    except Exception as error:
        raise StageFailure(name, error) from error


def run(command: str, body: Callable[[], CommandResult]) -> CommandResult:
    """Execute a command body, turning a stage failure into an error report."""
    try:
        with structlog.contextvars.bound_contextvars(command=command):
            return body()
    except StageFailure as failure:
        level = logger.warning if failure.negative else logger.error
        level("command_failed", command=command, stage=failure.stage, reason=failure.reason)
        return CommandResult(
            EXIT_NEGATIVE if failure.negative else EXIT_ERROR,
            {
                "command": command,
                "stage": failure.stage,
                "reason": failure.reason,
                "message": str(failure.error),
            },
        )


def _verdict(positive: bool) -> str:
    return "positive" if positive else "negative"


def _load_problem(path: Path, overrides: Overrides) -> Tuple[ProblemFile, TraceProblem]:
    with stage("parse"):
        document = load_document(path, ProblemFile)
        prob = document.to_problem(get_config().tolerances())
        prob = prob.with_tolerances(overrides.apply(prob.tolerances))
    logger.info("problem_loaded", path=str(path), n=prob.n, germs=prob.size)
    return document, prob


def _interpolate(prob: TraceProblem) -> InterpolationResult:
    with stage("choose_linear_form"):
        u = choose_linear_form(prob)
    with stage("characteristic_poly"):
        char = characteristic_poly(prob, u)
    with stage("interpolate"):
        return interpolate(prob, u, char)


def cmd_trace_test(path: Path, overrides: Overrides = Overrides()) -> CommandResult:
    """Affineness of Tr(x_i) in the constant coefficients, for every coordinate."""

    def body() -> CommandResult:
        _, prob = _load_problem(path, overrides)
        with stage("affineness_test"):
            report = affineness_test(prob)
        return CommandResult(
            EXIT_OK if report.positive else EXIT_NEGATIVE,
            {
                "command": "trace-test",
                "verdict": _verdict(report.positive),
                "seed": prob.tolerances.seed,
                "fit_tol": prob.tolerances.fit_tol,
                **report.to_dict(),
            },
        )

    return run("trace-test", body)


def cmd_interpolate(path: Path, out: Path, overrides: Overrides = Overrides()) -> CommandResult:
    """Interpolate the germs and write the normalized Q to ``out``."""

    def body() -> CommandResult:
        _, prob = _load_problem(path, overrides)
        result = _interpolate(prob)
        with stage("write"):
            write_polynomial(result.q, out)
        return CommandResult(
            EXIT_OK,
            {
                "command": "interpolate",
                "output": str(out),
                "seed": prob.tolerances.seed,
                **result.to_dict(),
            },
        )

    return run("interpolate", body)


def cmd_class_check(path: Path, overrides: Overrides = Overrides()) -> CommandResult:
    def body() -> CommandResult:
        document, prob = _load_problem(path, overrides)
        with stage("parse"):
            spec = document.to_class_spec()
            if spec is None:
                raise MissingClassSpec("problem file has no class_spec", path=str(path))
        result = _interpolate(prob)
        with stage("class_certificate"):
            certificate = class_certificate(prob, result, spec)
        table = [
            {"divisor": d.index, "observed": d.observed, "predicted": d.predicted}
            for d in certificate.divisors
        ]
        return CommandResult(
            EXIT_OK if certificate.positive else EXIT_NEGATIVE,
            {
                "command": "class-check",
                "verdict": _verdict(certificate.positive),
                "seed": prob.tolerances.seed,
                "table": table,
                **certificate.to_dict(),
            },
        )

    return run("class-check", body)


def cmd_residue_check(path: Path) -> CommandResult:
    """
    Global residue sum of a square system together with the polytope prediction.

    Exits 2 when the prediction says "vanishing" but the sum does not vanish.
    """

    def body() -> CommandResult:
        with stage("parse"):
            document = load_document(path, ResidueFile)
            h = document.to_numerator()
            system = document.to_system()
        with stage("residue_sum"):
            terms = residue_terms(h, system, document.toric)
            value = complex(sum(terms, 0j))
        with stage("khovanskii_predict"):
            try:
                vanishing = khovanskii_predict(h, system.equations)
            except DegeneratePolytopeError:
                vanishing = False
        scale = max((abs(t) for t in terms), default=0.0)
        holds = not vanishing or abs(value) <= RESIDUE_TOL * max(1.0, scale)
        return CommandResult(
            EXIT_OK if holds else EXIT_NEGATIVE,
            {
                "command": "residue-check",
                "residue": [value.real, value.imag],
                "predicted": "vanishing" if vanishing else "none",
                "toric": document.toric,
                "zeros": len(terms),
            },
        )

    return run("residue-check", body)


def cmd_mixed_volume(path: Path) -> CommandResult:
    def body() -> CommandResult:
        with stage("parse"):
            polytopes = load_document(path, MixedVolumeFile).to_polytopes()
        with stage("mixed_volume"):
            value = mixed_volume(polytopes)
        return CommandResult(EXIT_OK, {"command": "mixed-volume", "mixed_volume": value})

    return run("mixed-volume", body)
