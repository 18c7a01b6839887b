"""
Problem File Schemas

Pydantic models for the JSON documents read and written by the command line: trace
problems, polynomial files, residue systems and polytope lists. Complex numbers are
``[re, im]`` pairs and polynomial terms are ``[exponent, [re, im]]`` pairs.
"""

import json
from pathlib import Path
from typing import Any, Callable, List, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.algebra.germ import GermGraph, germ_from_polynomial
from src.algebra.polynomial import MultiPoly
from src.curves.family import CurveFamily, ParamPoint
from src.geometry.polytope import LatticePolytope
from src.reconstruct.certificate import ClassSpec, DivisorSpec
from src.residues.solver import SquareSystem
from src.traces.problem import TraceProblem
from src.utils.config import Tolerances
from src.utils.exceptions import AbelTraceError, InvariantViolation, ProblemFileError

ComplexPair = Tuple[float, float]
Term = Tuple[List[int], ComplexPair]
Vertices = List[List[int]]

Document = TypeVar("Document", bound=BaseModel)
Built = TypeVar("Built")


def _complex(pair: ComplexPair) -> complex:
    return complex(pair[0], pair[1])


def _polynomial(num_vars: int, terms: List[Term], where: str) -> MultiPoly:
    for exponent, _ in terms:
        if len(exponent) != num_vars or min(exponent, default=0) < 0:
            raise ProblemFileError(
                f"{where}: exponent {exponent} is not a non-negative {num_vars}-vector",
                location=where,
            )
    return MultiPoly.from_pairs(num_vars, terms)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PolynomialModel(StrictModel):
    """A polynomial file, as written by ``abeltrace interpolate``."""

    num_vars: int = Field(ge=1)
    terms: List[Term]

    def to_poly(self) -> MultiPoly:
        return _polynomial(self.num_vars, self.terms, "terms")

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "PolynomialModel":
        return cls(
            num_vars=p.num_vars,
            terms=[(list(e), (float(c[0]), float(c[1]))) for e, c in p.to_pairs()],
        )


class FamilyModel(StrictModel):
    supports: List[List[List[int]]] = Field(min_length=1)
    constants: List[ComplexPair]
    coefficients: List[List[ComplexPair]]


class GermModel(StrictModel):
    """
    Either an explicit graph (``series`` over the n-1 free coordinates, centered at the
    base point) or an implicit one (``polynomial`` whose branch through the base point is
    expanded to ``truncation_order``).
    """

    base_point: List[ComplexPair]
    graph_coordinate: int = Field(ge=0)
    truncation_order: int = Field(ge=2)
    radius: Optional[float] = Field(default=None, gt=0)
    series: Optional[List[Term]] = None
    polynomial: Optional[List[Term]] = None

    @model_validator(mode="after")
    def check_representation(self) -> "GermModel":
        if (self.series is None) == (self.polynomial is None):
            raise ValueError("exactly one of 'series' and 'polynomial' is required")
        if self.series is not None and self.radius is None:
            raise ValueError("an explicit series needs a radius")
        return self


class DivisorModel(StrictModel):
    polytope: Vertices = Field(min_length=1)
    section: List[Term] = Field(min_length=1)


class ClassSpecModel(StrictModel):
    alpha: Vertices = Field(min_length=1)
    divisors: List[DivisorModel] = Field(min_length=1)
    bundles: List[Vertices] = Field(default_factory=list)


class ToleranceModel(StrictModel):
    fit_tol: Optional[float] = Field(default=None, gt=0)
    transversality_threshold: Optional[float] = Field(default=None, gt=0)
    continuation_steps: Optional[int] = Field(default=None, ge=1)
    max_halvings: Optional[int] = Field(default=None, ge=0)
    grid_size: Optional[int] = Field(default=None, ge=2)
    grid_radius: Optional[float] = Field(default=None, gt=0)
    max_probe_degree: Optional[int] = Field(default=None, ge=0)
    leading_coefficient_tol: Optional[float] = Field(default=None, gt=0)
    validation_tol: Optional[float] = Field(default=None, gt=0)
    support_tol: Optional[float] = Field(default=None, gt=0)
    validation_offsets: Optional[int] = Field(default=None, ge=1)


class ProblemFile(StrictModel):
    dimension: int = Field(ge=2)
    family: FamilyModel
    germs: List[GermModel] = Field(min_length=1)
    class_spec: Optional[ClassSpecModel] = None
    tolerances: ToleranceModel = Field(default_factory=ToleranceModel)
    seed: Optional[int] = Field(default=None, ge=0)

    def tolerance_profile(self, defaults: Tolerances) -> Tolerances:
        return defaults.override(seed=self.seed, **self.tolerances.model_dump())

    def to_family(self) -> CurveFamily:
        n = self.dimension
        fam = self.family
        if len(fam.constants) != n - 1 or len(fam.coefficients) != n - 1:
            raise ProblemFileError(
                "family: one constant and one coefficient row per equation are required",
                location="family",
                expected=n - 1,
            )
        for k, (support, row) in enumerate(zip(fam.supports, fam.coefficients)):
            if len(support) != len(row):
                raise ProblemFileError(
                    f"family.coefficients.{k}: expected {len(support)} coefficients",
                    location=f"family.coefficients.{k}",
                )
        base = ParamPoint(
            constants=tuple(_complex(c) for c in fam.constants),
            coefficients=tuple(tuple(_complex(c) for c in row) for row in fam.coefficients),
        )
        return _checked("family", CurveFamily, n, fam.supports, base)

    def to_germs(self) -> List[GermGraph]:
        n = self.dimension
        germs = []
        for j, model in enumerate(self.germs):
            where = f"germs.{j}"
            point = tuple(_complex(v) for v in model.base_point)
            if len(point) != n:
                raise ProblemFileError(
                    f"{where}.base_point: expected {n} coordinates", location=f"{where}.base_point"
                )
            if model.polynomial is not None:
                f = _polynomial(n, model.polynomial, f"{where}.polynomial")
                germ = _checked(
                    where,
                    germ_from_polynomial,
                    f,
                    point,
                    model.graph_coordinate,
                    model.truncation_order,
                    model.radius,
                )
            else:
                series = _polynomial(n - 1, model.series or [], f"{where}.series")
                germ = _checked(
                    where,
                    GermGraph,
                    point,
                    model.graph_coordinate,
                    series,
                    model.truncation_order,
                    model.radius,
                )
            germs.append(germ)
        return germs

    def to_problem(self, defaults: Tolerances) -> TraceProblem:
        fam = self.to_family()
        germs = self.to_germs()
        return _checked(
            "problem", TraceProblem, fam, tuple(germs), None, self.tolerance_profile(defaults)
        )

    def to_class_spec(self) -> Optional[ClassSpec]:
        if self.class_spec is None:
            return None
        n = self.dimension
        spec = self.class_spec
        divisors = [
            DivisorSpec(
                polytope=_polytope(n, d.polytope, f"class_spec.divisors.{j}.polytope"),
                section=_polynomial(n, d.section, f"class_spec.divisors.{j}.section"),
            )
            for j, d in enumerate(spec.divisors)
        ]
        bundles = [
            _polytope(n, vertices, f"class_spec.bundles.{j}")
            for j, vertices in enumerate(spec.bundles)
        ]
        return _checked(
            "class_spec",
            ClassSpec,
            _polytope(n, spec.alpha, "class_spec.alpha"),
            tuple(divisors),
            tuple(bundles),
        )


class ResidueFile(StrictModel):
    """A square system with a numerator; ``zeros`` may supply the common zeros."""

    dimension: int = Field(ge=1)
    numerator: List[Term]
    equations: List[List[Term]] = Field(min_length=1)
    toric: bool = False
    zeros: Optional[List[List[ComplexPair]]] = None

    def to_numerator(self) -> MultiPoly:
        return _polynomial(self.dimension, self.numerator, "numerator")

    def to_equations(self) -> List[MultiPoly]:
        return [
            _polynomial(self.dimension, terms, f"equations.{k}")
            for k, terms in enumerate(self.equations)
        ]

    def to_system(self) -> SquareSystem:
        zeros = None
        if self.zeros is not None:
            zeros = tuple(tuple(_complex(v) for v in z) for z in self.zeros)
        return _checked(
            "equations", SquareSystem, self.dimension, tuple(self.to_equations()), zeros
        )


class MixedVolumeFile(StrictModel):
    polytopes: List[Vertices] = Field(min_length=1)

    def to_polytopes(self) -> List[LatticePolytope]:
        if any(not vertices for vertices in self.polytopes):
            raise ProblemFileError("polytopes: empty vertex list", location="polytopes")
        n = len(self.polytopes[0][0])
        return [
            _polytope(n, vertices, f"polytopes.{j}") for j, vertices in enumerate(self.polytopes)
        ]


def _polytope(n: int, vertices: Vertices, where: str) -> LatticePolytope:
    if any(len(v) != n for v in vertices):
        raise ProblemFileError(f"{where}: vertices must be {n}-vectors", location=where)
    return _checked(where, LatticePolytope.from_points, [tuple(v) for v in vertices])


def _checked(where: str, build: Callable[..., Built], *args: Any) -> Built:
    """Run a constructor, turning invariant failures into located file errors."""
    try:
        return build(*args)
    except InvariantViolation as error:
        raise ProblemFileError(
            f"{where}: {error} [invariant: {error.invariant}]",
            location=where,
            invariant=error.invariant,
        ) from error
    except AbelTraceError as error:
        raise ProblemFileError(f"{where}: {error}", location=where) from error


def load_document(path: Path, model: Type[Document]) -> Document:
    """
    Parse and validate a JSON document.

    Raises:
        ProblemFileError: unreadable file, JSON syntax error (with line and column) or a
            schema violation (with the dotted location of the offending field)
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ProblemFileError(f"{path}: {error.strerror}", path=str(path)) from error
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as error:
        raise ProblemFileError(
            f"{path}: line {error.lineno} column {error.colno}: {error.msg}",
            line=error.lineno,
            column=error.colno,
        ) from error
    try:
        return model.model_validate(raw)
    except ValidationError as error:
        first = error.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise ProblemFileError(
            f"{path}: {location}: {first['msg']}",
            location=location,
            errors=error.error_count(),
        ) from error


def write_polynomial(p: MultiPoly, path: Path) -> None:
    document = PolynomialModel.from_poly(p)
    Path(path).write_text(
        json.dumps(document.model_dump(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
