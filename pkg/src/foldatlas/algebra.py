"""Sparse polynomial arithmetic in (x, y, z) and Lie-derivative calculus.

All classification formulas in this package evaluate on exact polynomial
objects: the switching function is the coordinate z, the two vector fields
are polynomial, and every tangency/transversality test reduces to evaluating
iterated Lie derivatives at a point.
"""

from __future__ import annotations

import math

VARS = ("x", "y", "z")
_VAR_INDEX = {"x": 0, "y": 1, "z": 2}

# Input systems are capped at total degree 8 (see the system module); Lie
# chains of length <= 3 on such inputs stay below 3x that, so any polynomial
# reaching this cap signals a runaway computation rather than valid use.
MAX_TOTAL_DEGREE = 24


class DegreeCapError(ValueError):
    """A polynomial exceeded the configured total-degree cap."""


def _prune(terms):
    return {e: c for e, c in terms.items() if c != 0.0}


class Poly3:
    """Polynomial in (x, y, z) stored as ``{(i, j, k): coefficient}``.

    Zero coefficients are never stored (exact ``0.0`` pruning only; numeric
    tolerances belong to consumers).  Instances are immutable by convention:
    every operation returns a new object, so values are safe to share across
    threads.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None, max_degree=MAX_TOTAL_DEGREE):
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                i, j, k = exps
                if i < 0 or j < 0 or k < 0:
                    raise ValueError(f"negative exponent in {exps}")
                c = float(coeff)
                if c != 0.0:
                    clean[(int(i), int(j), int(k))] = c
        self.terms = clean
        deg = self.degree()
        if deg > max_degree:
            raise DegreeCapError(f"degree {deg} exceeds cap {max_degree}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0): float(c)})

    @classmethod
    def variable(cls, name):
        idx = _VAR_INDEX[name]
        exps = [0, 0, 0]
        exps[idx] = 1
        return cls({tuple(exps): 1.0})

    @classmethod
    def from_terms(cls, pairs):
        """Build from an iterable of ``((i, j, k), coefficient)`` pairs."""
        acc = {}
        for exps, coeff in pairs:
            key = tuple(int(e) for e in exps)
            acc[key] = acc.get(key, 0.0) + float(coeff)
        return cls(acc)

    # -- queries -----------------------------------------------------------

    def degree(self):
        if not self.terms:
            return 0
        return max(i + j + k for (i, j, k) in self.terms)

    def is_zero(self):
        return not self.terms

    def coeff_scale(self):
        if not self.terms:
            return 0.0
        return max(abs(c) for c in self.terms.values())

    def items(self):
        return sorted(self.terms.items())

    def eval(self, x, y, z):
        total = 0.0
        for (i, j, k), c in self.terms.items():
            total += c * x**i * y**j * z**k
        return total

    def eval_at(self, point):
        return self.eval(point[0], point[1], point[2])

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly3):
            other = Poly3.constant(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0.0) + c
        return Poly3(_prune(acc))

    __radd__ = __add__

    def __neg__(self):
        return Poly3({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly3):
            other = Poly3.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly3):
            return self.scaled(other)
        acc = {}
        for (i1, j1, k1), c1 in self.terms.items():
            for (i2, j2, k2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2, k1 + k2)
                acc[key] = acc.get(key, 0.0) + c1 * c2
        return Poly3(_prune(acc))

    __rmul__ = __mul__

    def scaled(self, c):
        c = float(c)
        if c == 0.0:
            return Poly3.zero()
        return Poly3({e: c * v for e, v in self.terms.items()})

    def partial(self, var):
        idx = _VAR_INDEX[var]
        acc = {}
        for exps, c in self.terms.items():
            p = exps[idx]
            if p == 0:
                continue
            new = list(exps)
            new[idx] = p - 1
            acc[tuple(new)] = acc.get(tuple(new), 0.0) + c * p
        return Poly3(acc)

    def subs_z0(self):
        """Restrict to the switching plane: substitute z = 0."""
        return Poly3({e: c for e, c in self.terms.items() if e[2] == 0})

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Poly3) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def approx_equal(self, other, tol=1e-12):
        keys = set(self.terms) | set(other.terms)
        scale = 1.0 + max(self.coeff_scale(), other.coeff_scale())
        return all(
            abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol * scale
            for k in keys
        )

    def as_expr(self):
        """Python expression string in x, y, z (used for compilation)."""
        if not self.terms:
            return "0.0"
        pieces = []
        for (i, j, k), c in self.items():
            factors = [repr(c)]
            for var, p in zip(VARS, (i, j, k)):
                if p == 1:
                    factors.append(var)
                elif p > 1:
                    factors.append(f"{var}**{p}")
            pieces.append("*".join(factors))
        return " + ".join(pieces)

    def compiled(self):
        """Fast evaluator ``f(x, y, z) -> float`` for hot numeric loops."""
        return eval(  # expression is generated from numeric coefficients only
            compile(f"lambda x, y, z: ({self.as_expr()})", "<poly3>", "eval"),
            {"__builtins__": {}},
        )

    def __repr__(self):
        return f"Poly3({self.as_expr()})"


POLY_X = Poly3.variable("x")
POLY_Y = Poly3.variable("y")
POLY_Z = Poly3.variable("z")

#: The switching function f(x, y, z) = z, fixed package-wide.
SWITCHING_FUNCTION = POLY_Z


def poly_eval(p, point):
    """Evaluate ``p`` at a point of R^3."""
    return p.eval_at(point)


def poly_partial(p, var):
    """Exact formal partial derivative with respect to ``var``."""
    return p.partial(var)


class VectorField3:
    """Polynomial vector field on R^3 with components (cx, cy, cz)."""

    __slots__ = ("cx", "cy", "cz", "_fn")

    def __init__(self, cx, cy, cz):
        self.cx = cx
        self.cy = cy
        self.cz = cz
        self._fn = None

    def components(self):
        return (self.cx, self.cy, self.cz)

    def lie(self, g):
        return lie_derivative(self, g)

    def eval_at(self, point):
        return (self.cx.eval_at(point), self.cy.eval_at(point), self.cz.eval_at(point))

    def degree(self):
        return max(p.degree() for p in self.components())

    def coeff_scale(self):
        return max(p.coeff_scale() for p in self.components())

    def negated(self):
        return VectorField3(-self.cx, -self.cy, -self.cz)

    def compiled(self):
        """Cached evaluator ``f(x, y, z) -> (fx, fy, fz)``."""
        if self._fn is None:
            src = "lambda x, y, z: (({}), ({}), ({}))".format(
                self.cx.as_expr(), self.cy.as_expr(), self.cz.as_expr()
            )
            self._fn = eval(compile(src, "<field3>", "eval"), {"__builtins__": {}})
        return self._fn

    def __eq__(self, other):
        return (
            isinstance(other, VectorField3)
            and self.cx == other.cx
            and self.cy == other.cy
            and self.cz == other.cz
        )

    def __repr__(self):
        return f"VectorField3({self.cx!r}, {self.cy!r}, {self.cz!r})"


def lie_derivative(field, g):
    """Directional derivative of ``g`` along ``field``: field . grad(g).

    Iterating implements higher-order and mixed derivatives, e.g.
    ``lie_derivative(X, lie_derivative(X, f))`` is the second derivative of f
    along X.
    """
    return (
        field.cx * g.partial("x")
        + field.cy * g.partial("y")
        + field.cz * g.partial("z")
    )


def gradient_on_sigma(g):
    """Planar gradient of ``g`` restricted to the switching plane z = 0."""
    return (g.partial("x").subs_z0(), g.partial("y").subs_z0())


def finite_coefficients(p):
    return all(math.isfinite(c) for c in p.terms.values())
