"""Model definition, ingestion and validation of piecewise-smooth systems.

A system is a pair Z = (X, Y) of polynomial vector fields: X governs the
upper half-space M+ = {z > 0}, Y the lower half-space M- = {z < 0}, and the
switching surface is the plane {z = 0}.  Curved switching surfaces must be
pre-flattened by the caller; with f(x, y, z) = z, 0 is automatically a
regular value of f.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import (
    DegreeCapError,
    Poly3,
    SWITCHING_FUNCTION,
    VectorField3,
    finite_coefficients,
    lie_derivative,
)
from .errors import (
    DegreeCapExceededError,
    EmptyBoxError,
    MalformedDocumentError,
    NonFiniteCoefficientError,
    PreconditionError,
)

#: Maximum total degree accepted for input field components.
INPUT_DEGREE_CAP = 8

_COMPONENT_KEYS = ("cx", "cy", "cz")


@dataclass(frozen=True)
class Box:
    """Axis-aligned analysis window in R^3."""

    xmin: float = -1.0
    xmax: float = 1.0
    ymin: float = -1.0
    ymax: float = 1.0
    zmin: float = -1.0
    zmax: float = 1.0

    @classmethod
    def from_sequence(cls, seq):
        vals = [float(v) for v in seq]
        if len(vals) != 6 or not all(math.isfinite(v) for v in vals):
            raise MalformedDocumentError("box must be six finite numbers")
        return cls(*vals)

    def as_tuple(self):
        return (self.xmin, self.xmax, self.ymin, self.ymax, self.zmin, self.zmax)

    def volume(self):
        return (
            max(self.xmax - self.xmin, 0.0)
            * max(self.ymax - self.ymin, 0.0)
            * max(self.zmax - self.zmin, 0.0)
        )

    def sigma_area(self):
        """Area of the slice {z = 0} inside the box (0 if the box misses it)."""
        if self.zmin > 0.0 or self.zmax < 0.0:
            return 0.0
        return max(self.xmax - self.xmin, 0.0) * max(self.ymax - self.ymin, 0.0)

    def scale(self):
        return max(
            self.xmax - self.xmin,
            self.ymax - self.ymin,
            self.zmax - self.zmin,
            0.0,
        )

    def contains(self, point, pad=0.0):
        x, y, z = point[0], point[1], point[2]
        return (
            self.xmin - pad <= x <= self.xmax + pad
            and self.ymin - pad <= y <= self.ymax + pad
            and self.zmin - pad <= z <= self.zmax + pad
        )


DEFAULT_BOX = Box()


class PiecewiseSystem:
    """A pair Z = (X, Y) of vector fields split by the plane {z = 0}.

    Immutable after construction; Lie derivatives of the switching function
    are computed lazily and cached, so concurrent readers are safe.
    """

    def __init__(self, X, Y, box=DEFAULT_BOX, name="system"):
        self.X = X
        self.Y = Y
        self.box = box
        self.name = name

    # First and higher Lie derivatives of f(x,y,z) = z along X and Y.

    @cached_property
    def xf(self):
        return lie_derivative(self.X, SWITCHING_FUNCTION)

    @cached_property
    def yf(self):
        return lie_derivative(self.Y, SWITCHING_FUNCTION)

    @cached_property
    def x2f(self):
        return lie_derivative(self.X, self.xf)

    @cached_property
    def y2f(self):
        return lie_derivative(self.Y, self.yf)

    @cached_property
    def x3f(self):
        return lie_derivative(self.X, self.x2f)

    @cached_property
    def y3f(self):
        return lie_derivative(self.Y, self.y2f)

    @cached_property
    def xyf(self):
        """Mixed derivative: d(Yf) along X."""
        return lie_derivative(self.X, self.yf)

    @cached_property
    def yxf(self):
        """Mixed derivative: d(Xf) along Y."""
        return lie_derivative(self.Y, self.xf)

    def coeff_scale(self):
        return max(self.X.coeff_scale(), self.Y.coeff_scale())

    def time_reversed(self):
        """System whose orbits are those of Z run backwards in time."""
        return PiecewiseSystem(
            self.X.negated(), self.Y.negated(), self.box, self.name + "(reversed)"
        )

    def swapped(self):
        """System (Y, X): used by the sliding-kind symmetry property."""
        return PiecewiseSystem(self.Y, self.X, self.box, self.name + "(swapped)")

    def __repr__(self):
        return f"PiecewiseSystem({self.name!r})"


# ---------------------------------------------------------------------------
# Descriptor (JSON) layer


@dataclass
class SystemDescriptor:
    """Plain-data form of a system, mirroring the JSON document schema."""

    name: str
    box: list
    X: dict
    Y: dict

    def to_system(self):
        fields = {}
        for label, raw in (("X", self.X), ("Y", self.Y)):
            comps = []
            for key in _COMPONENT_KEYS:
                comps.append(_parse_component(raw.get(key, []), f"{label}.{key}"))
            fields[label] = VectorField3(*comps)
        box = Box.from_sequence(self.box)
        _require_usable_box(box)
        return PiecewiseSystem(fields["X"], fields["Y"], box, self.name)

    @classmethod
    def from_system(cls, system):
        def dump_field(f):
            return {
                key: [[list(e), c] for e, c in poly.items()]
                for key, poly in zip(_COMPONENT_KEYS, f.components())
            }

        return cls(
            name=system.name,
            box=list(system.box.as_tuple()),
            X=dump_field(system.X),
            Y=dump_field(system.Y),
        )

    def to_json(self):
        return json.dumps(
            {"name": self.name, "box": self.box, "X": self.X, "Y": self.Y},
            indent=2,
        )

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedDocumentError(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise MalformedDocumentError("document root must be an object")
        missing = {"name", "box", "X", "Y"} - set(doc)
        if missing:
            raise MalformedDocumentError(f"missing keys: {sorted(missing)}")
        if not isinstance(doc["name"], str):
            raise MalformedDocumentError("name must be a string")
        for label in ("X", "Y"):
            if not isinstance(doc[label], dict):
                raise MalformedDocumentError(f"{label} must be an object")
        if not isinstance(doc["box"], list):
            raise MalformedDocumentError("box must be a list")
        return cls(name=doc["name"], box=doc["box"], X=doc["X"], Y=doc["Y"])


def _parse_component(entries, where):
    if not isinstance(entries, list):
        raise MalformedDocumentError(f"{where}: expected a list of terms")
    pairs = []
    for entry in entries:
        try:
            exps, coeff = entry
            i, j, k = exps
        except (TypeError, ValueError) as exc:
            raise MalformedDocumentError(f"{where}: bad term {entry!r}") from exc
        for e in (i, j, k):
            if not isinstance(e, int) or e < 0:
                raise MalformedDocumentError(
                    f"{where}: exponents must be non-negative integers"
                )
        if not isinstance(coeff, (int, float)) or isinstance(coeff, bool):
            raise MalformedDocumentError(f"{where}: coefficient must be a number")
        if not math.isfinite(float(coeff)):
            raise NonFiniteCoefficientError(f"{where}: non-finite coefficient")
        pairs.append(((i, j, k), float(coeff)))
    try:
        poly = Poly3.from_terms(pairs)
    except DegreeCapError as exc:
        raise DegreeCapExceededError(f"{where}: {exc}") from exc
    if poly.degree() > INPUT_DEGREE_CAP:
        raise DegreeCapExceededError(
            f"{where}: degree {poly.degree()} exceeds input cap {INPUT_DEGREE_CAP}"
        )
    return poly


def _require_usable_box(box):
    if box.volume() <= 0.0:
        raise EmptyBoxError("box has no volume")
    if box.sigma_area() <= 0.0:
        raise EmptyBoxError("box does not contain a slice of {z=0} with area")


def load_system(text):
    """Parse a JSON document into a validated :class:`PiecewiseSystem`."""
    return SystemDescriptor.from_json(text).to_system()


def serialize_system(system):
    """Inverse of :func:`load_system`; coefficients round-trip bitwise."""
    return SystemDescriptor.from_system(system).to_json()


# ---------------------------------------------------------------------------
# Normal form builder


def build_normal_form(alpha, beta, gamma, delta, hot=None, box=DEFAULT_BOX):
    """Fold-fold normal form with the singularity at the origin.

    X = (alpha, 1, delta*y) and Y = (gamma, beta, x) + optional higher-order
    terms on Y.  ``delta`` must be +-1 (it is the sign of the second
    derivative of z along X at the origin) and ``gamma`` must be nonzero
    (its sign is the sign of the second derivative of z along Y).  Permitted
    higher-order terms vanish at the origin for the first two Y-components
    and to second order for the third.
    """
    for val, label in ((alpha, "alpha"), (beta, "beta"), (gamma, "gamma")):
        if not math.isfinite(float(val)):
            raise PreconditionError(f"{label} must be finite")
    if delta not in (-1, 1, -1.0, 1.0):
        raise PreconditionError("delta must be -1 or +1")
    if gamma == 0.0:
        raise PreconditionError("gamma must be nonzero")

    X = VectorField3(
        Poly3.constant(alpha),
        Poly3.constant(1.0),
        Poly3({(0, 1, 0): float(delta)}),
    )
    y_comps = [
        Poly3.constant(gamma),
        Poly3.constant(beta),
        Poly3({(1, 0, 0): 1.0}),
    ]
    if hot:
        min_order = {"cx": 1, "cy": 1, "cz": 2}
        for idx, key in enumerate(_COMPONENT_KEYS):
            entries = hot.get(key)
            if not entries:
                continue
            extra = _parse_component(entries, f"hot.{key}")
            low = min(
                (i + j + k for (i, j, k) in extra.terms), default=min_order[key]
            )
            if low < min_order[key]:
                raise PreconditionError(
                    f"hot.{key}: terms must vanish to order {min_order[key]}"
                )
            y_comps[idx] = y_comps[idx] + extra
    Y = VectorField3(*y_comps)
    name = f"normal-form(alpha={alpha}, beta={beta}, gamma={gamma}, delta={int(delta)})"
    return PiecewiseSystem(X, Y, box, name)


# ---------------------------------------------------------------------------
# Validation report


@dataclass
class ValidationReport:
    warnings: list = field(default_factory=list)
    degree_x: int = 0
    degree_y: int = 0
    box_volume: float = 0.0
    sigma_area: float = 0.0
    vanishing_points: dict = field(default_factory=dict)

    def ok(self):
        return not self.warnings


def _field_zeros_on_sigma(f, box, grid=41, tol=1e-10):
    """Grid-seeded Gauss-Newton search for zeros of a field on {z=0}."""
    fn = f.compiled()
    jac_polys = [
        [comp.partial(var).subs_z0() for var in ("x", "y")]
        for comp in f.components()
    ]
    jac_fns = [[p.compiled() for p in row] for row in jac_polys]
    xs = np.linspace(box.xmin, box.xmax, grid)
    ys = np.linspace(box.ymin, box.ymax, grid)
    found = []
    scale = 1.0 + f.coeff_scale()
    for x0 in xs:
        for y0 in ys:
            vx, vy, vz = fn(x0, y0, 0.0)
            norm = math.hypot(vx, math.hypot(vy, vz))
            if norm > 0.2 * scale:
                continue
            x, y = float(x0), float(y0)
            for _ in range(25):
                r = np.array(fn(x, y, 0.0))
                if np.linalg.norm(r) <= tol * scale:
                    break
                J = np.array([[cell(x, y, 0.0) for cell in row] for row in jac_fns])
                JtJ = J.T @ J
                if abs(np.linalg.det(JtJ)) < 1e-18:
                    break
                step = np.linalg.solve(JtJ, J.T @ r)
                x, y = x - step[0], y - step[1]
            else:
                continue
            r = np.array(fn(x, y, 0.0))
            if np.linalg.norm(r) <= tol * scale and box.contains((x, y, 0.0), pad=1e-9):
                if all(math.hypot(x - px, y - py) > 1e-6 for px, py in found):
                    found.append((x, y))
    return found


def validate(system, grid=41, tol=1e-10):
    """Sanity report: degree caps, box geometry, field zeros on the surface.

    A field vanishing on the switching surface violates the precondition of
    every tangential-singularity classification, so it is reported as a
    warning rather than an error.
    """
    report = ValidationReport(
        degree_x=system.X.degree(),
        degree_y=system.Y.degree(),
        box_volume=system.box.volume(),
        sigma_area=system.box.sigma_area(),
    )
    if report.degree_x > INPUT_DEGREE_CAP:
        report.warnings.append(f"X degree {report.degree_x} exceeds cap")
    if report.degree_y > INPUT_DEGREE_CAP:
        report.warnings.append(f"Y degree {report.degree_y} exceeds cap")
    if report.box_volume <= 0.0:
        report.warnings.append("box has zero volume")
    if report.sigma_area <= 0.0:
        report.warnings.append("box does not intersect the switching plane")
    for label, f in (("X", system.X), ("Y", system.Y)):
        if not all(finite_coefficients(p) for p in f.components()):
            report.warnings.append(f"{label} has non-finite coefficients")
            continue
        if report.sigma_area > 0.0:
            zeros = _field_zeros_on_sigma(f, system.box, grid=grid, tol=tol)
            if zeros:
                report.vanishing_points[label] = zeros
                report.warnings.append(
                    f"{label} vanishes on the switching surface (e.g. at "
                    f"({zeros[0][0]:.6g}, {zeros[0][1]:.6g}, 0))"
                )
    return report
