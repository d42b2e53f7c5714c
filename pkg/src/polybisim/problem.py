"""Problem-file ingestion.

A problem is one JSON document; every numeric entry is a decimal string
so it can be parsed digit-exactly into a rational.  All validation lives
here and failures carry a stable error code, so callers can map them to
exit codes without string matching.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .abstraction import ObservedRegion
from .geometry import Cell, Constraint, mat, vec
from .lyapunov import LinearSystem, PolyhedralLF

MALFORMED = "MALFORMED"
RANK_DEFICIENT = "RANK_DEFICIENT"
RHO_RANGE = "RHO_RANGE"
GAMMA_ORDER = "GAMMA_ORDER"
REGION_OVERLAP = "REGION_OVERLAP"
REGION_DOMAIN = "REGION_DOMAIN"


class ProblemError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class ProblemSpec:
    system: LinearSystem
    lf: PolyhedralLF
    gamma_d: Fraction
    gamma_x: Fraction
    regions: tuple[ObservedRegion, ...]
    formula: Optional[str]
    sample_count: int = 0

    @property
    def n(self) -> int:
        return self.system.n


def _fraction(value, what: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ProblemError(MALFORMED, f"cannot parse {what}: {value!r}") from exc


def _matrix(rows, what: str):
    if not isinstance(rows, list) or not rows:
        raise ProblemError(MALFORMED, f"{what} must be a non-empty matrix")
    return mat([[_fraction(v, what) for v in row] for row in rows])


def parse_problem(doc: dict) -> ProblemSpec:
    if not isinstance(doc, dict):
        raise ProblemError(MALFORMED, "problem document must be an object")
    for key in ("A", "L", "rho", "gamma_D", "gamma_X"):
        if key not in doc:
            raise ProblemError(MALFORMED, f"missing field {key!r}")

    a = _matrix(doc["A"], "A")
    try:
        system = LinearSystem(a)
    except ValueError as exc:
        raise ProblemError(MALFORMED, str(exc)) from exc

    l_rows = _matrix(doc["L"], "L")
    rho = _fraction(doc["rho"], "rho")
    if not (0 < rho < 1):
        raise ProblemError(RHO_RANGE, f"rho={rho} is outside (0, 1)")
    try:
        lf = PolyhedralLF(l_rows, rho)
    except ValueError as exc:
        raise ProblemError(RANK_DEFICIENT, str(exc)) from exc
    if lf.n != system.n:
        raise ProblemError(MALFORMED, "L column count does not match A")

    gamma_d = _fraction(doc["gamma_D"], "gamma_D")
    gamma_x = _fraction(doc["gamma_X"], "gamma_X")
    if not (0 < gamma_d < gamma_x):
        raise ProblemError(
            GAMMA_ORDER, f"need 0 < gamma_D < gamma_X, got {gamma_d}, {gamma_x}"
        )

    regions = []
    for entry in doc.get("regions", []):
        for key in ("name", "H", "h"):
            if key not in entry:
                raise ProblemError(MALFORMED, f"region missing field {key!r}")
        h_mat = _matrix(entry["H"], "region H")
        h_vec = [_fraction(v, "region h") for v in entry["h"]]
        if len(h_mat) != len(h_vec):
            raise ProblemError(MALFORMED, "region H and h sizes differ")
        if any(len(r) != system.n for r in h_mat):
            raise ProblemError(MALFORMED, "region H width does not match A")
        cell = Cell(
            system.n,
            [Constraint(row, off, False) for row, off in zip(h_mat, h_vec)],
        )
        try:
            regions.append(ObservedRegion(str(entry["name"]), cell))
        except ValueError as exc:
            raise ProblemError(MALFORMED, str(exc)) from exc

    _validate_region_geometry(lf, gamma_d, gamma_x, regions)

    options = doc.get("options", {})
    return ProblemSpec(
        system=system,
        lf=lf,
        gamma_d=gamma_d,
        gamma_x=gamma_x,
        regions=tuple(regions),
        formula=doc.get("formula"),
        sample_count=int(options.get("sample_count", 0)),
    )


def _validate_region_geometry(lf, gamma_d, gamma_x, regions) -> None:
    from .geometry import Region, cells_disjoint, difference
    from .lyapunov import sublevel_cell

    x_cell = sublevel_cell(lf, gamma_x)
    d_cell = sublevel_cell(lf, gamma_d)
    outside = difference(Region.of([x_cell]), Region.of([d_cell]))
    for r in regions:
        if not difference(Region.of([r.cell]), outside).is_empty():
            raise ProblemError(
                REGION_DOMAIN,
                f"region {r.label} is not inside the working set minus "
                "the target set",
            )
    for i, a in enumerate(regions):
        for b in regions[i + 1 :]:
            if not cells_disjoint(a.cell, b.cell):
                raise ProblemError(
                    REGION_OVERLAP, f"regions {a.label} and {b.label} overlap"
                )


def load_problem(path) -> ProblemSpec:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemError(MALFORMED, f"cannot read problem file: {exc}") from exc
    return parse_problem(doc)
