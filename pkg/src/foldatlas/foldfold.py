"""Two-fold singularity analysis: normal parameters, the pair of fold
involutions, first-return-map eigenanalysis, structural-stability verdicts
and moduli diagnostics.

Every decision reduces to inequalities in the normal parameters
(alpha, beta, gamma, delta): alpha and beta are the rescaled mixed second
derivatives of the switching function along the two fields, delta is the
sign of the second derivative along X and gamma carries the sign of the one
along Y.  All verdicts are invariant under the residual rescaling
(alpha, beta, gamma) -> (e*alpha, e*beta, e^2*gamma), e > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import IntegrationFailure, PreconditionError
from .integrator import (
    IntegratorConfig,
    fold_map_numeric,
    inverse_return_map_numeric,
    jacobian_numeric,
    return_map_numeric,
)
from .sigma import (
    FoldFoldSubtype,
    SigmaKind,
    TangencyType,
    classify_point,
    default_tolerance,
    subtype_from_signs,
    tangency_type,
)
from .sliding import (
    SlidingRegionTag,
    classify_hyperbolic_region,
    classify_parabolic_region,
    linear_eigensystem,
    mirror_visible_invisible,
    normalized_sliding_field,
    sliding_region_class,
)

BOUNDARY_BAND = 1e-9


def _near(u, v, rel=BOUNDARY_BAND):
    return abs(u - v) <= rel * (1.0 + abs(u) + abs(v))


@dataclass(frozen=True)
class NormalParameters:
    """Coefficients of the two-fold normal form at the singular point."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    subtype: FoldFoldSubtype

    def __post_init__(self):
        if self.delta not in (-1.0, 1.0, -1, 1):
            raise PreconditionError("delta must be -1 or +1")
        if self.gamma == 0.0:
            raise PreconditionError("gamma must be nonzero")


def make_parameters(alpha, beta, gamma, delta):
    """Normal parameters with the subtype implied by (delta, sign gamma)."""
    return NormalParameters(
        float(alpha),
        float(beta),
        float(gamma),
        float(delta),
        subtype_from_signs(math.copysign(1.0, delta), math.copysign(1.0, gamma)),
    )


def normal_parameters(system, point, tol=None):
    """Extract normal parameters of a two-fold point of an arbitrary system.

    Time-rescaling each field so both second derivatives have unit size
    gives ``alpha = XYf / sqrt(|X2f| |Y2f|)``,
    ``beta = delta * YXf / sqrt(|X2f| |Y2f|)``, ``gamma = sign(Y2f)`` and
    ``delta = sign(X2f)``.  On systems built in normal coordinates with
    |gamma| = 1 this recovers the inputs exactly; otherwise it returns the
    rescaled representative, and every downstream verdict is invariant under
    that rescaling.
    """
    tol = default_tolerance(system) if tol is None else tol
    info = tangency_type(system, point, tol)
    if info.ttype is not TangencyType.FOLD_FOLD:
        raise PreconditionError(
            f"not a two-fold point: tangency type is {info.ttype.value} ({info.detail})"
        )
    x2 = system.x2f.eval_at(point)
    y2 = system.y2f.eval_at(point)
    if abs(x2) <= tol or abs(y2) <= tol:
        raise PreconditionError("degenerate two-fold: a second derivative vanishes")
    denom = math.sqrt(abs(x2) * abs(y2))
    delta = math.copysign(1.0, x2)
    gamma = math.copysign(1.0, y2)
    alpha = system.xyf.eval_at(point) / denom
    beta = delta * system.yxf.eval_at(point) / denom
    return NormalParameters(alpha, beta, gamma, delta, info.subtype)


def mirror_parameters(params):
    """Invisible-visible representative of a visible-invisible point."""
    if params.subtype is not FoldFoldSubtype.VISIBLE_INVISIBLE:
        raise PreconditionError("mirror applies to visible-invisible points")
    a, b, g = mirror_visible_invisible(params.alpha, params.beta, params.gamma)
    return NormalParameters(a, b, g, -1.0, FoldFoldSubtype.INVISIBLE_VISIBLE)


# ---------------------------------------------------------------------------
# Involutions and the first-return map


def analytic_involutions(params):
    """Linear parts of the two fold involutions on the plane.

    ``A_X = [[1, -2a], [0, -1]]`` and ``A_Y = [[-1, 0], [-2b/g, 1]]``; both
    square to the identity and have determinant -1.
    """
    a, b, g = params.alpha, params.beta, params.gamma
    if g == 0.0:
        raise PreconditionError("gamma must be nonzero")
    ax = np.array([[1.0, -2.0 * a], [0.0, -1.0]])
    ay = np.array([[-1.0, 0.0], [-2.0 * b / g, 1.0]])
    return ax, ay


class FixedPointClass(Enum):
    SADDLE = "saddle"
    NONHYPERBOLIC_COMPLEX = "nonhyperbolic-complex"
    NONHYPERBOLIC_UNIT = "nonhyperbolic-unit"  # double eigenvalue +1
    PARABOLIC_BOUNDARY = "parabolic-boundary"  # double eigenvalue -1


class EigvecLocation(Enum):
    IN_CROSSING = "crossing"
    IN_SLIDING = "sliding"
    ON_TANGENCY = "tangency"


@dataclass
class ReturnMapAnalysis:
    matrix: np.ndarray
    trace: float
    det: float
    eigenvalues: tuple  # (contracting, expanding) for a saddle; complex pair otherwise
    fixed_point_class: FixedPointClass
    tau: float | None = None
    v_contracting: np.ndarray | None = None
    v_expanding: np.ndarray | None = None
    location_contracting: EigvecLocation | None = None
    location_expanding: EigvecLocation | None = None


def _eigvec(m, lam):
    r1 = (m[0, 0] - lam, m[0, 1])
    r2 = (m[1, 0], m[1, 1] - lam)
    row = r1 if r1[0] ** 2 + r1[1] ** 2 >= r2[0] ** 2 + r2[1] ** 2 else r2
    v = np.array([-row[1], row[0]])
    n = np.linalg.norm(v)
    return v / n if n > 0 else np.array([1.0, 0.0])


def _locate(v, rel=BOUNDARY_BAND):
    """Quadrant of an eigendirection in the chart where the crossing region
    is {x*y < 0} and the sliding region is {x*y > 0}."""
    prod = v[0] * v[1]
    if abs(prod) <= rel * float(v[0] ** 2 + v[1] ** 2):
        return EigvecLocation.ON_TANGENCY
    return EigvecLocation.IN_CROSSING if prod < 0 else EigvecLocation.IN_SLIDING


def return_map_analysis(params, rel=BOUNDARY_BAND):
    """Spectral analysis of the first-return map at a T-singularity.

    The linearization is ``A_X @ A_Y = [[-1 + 4ab/g, -2a], [2b/g, -1]]``
    with determinant exactly 1, so the fixed point is a saddle precisely
    when |trace| > 2, equivalently when ``a*b*(a*b - g) > 0``.
    """
    if params.subtype is not FoldFoldSubtype.INVISIBLE:
        raise PreconditionError("return map analysis needs an invisible two-fold")
    a, b, g = params.alpha, params.beta, params.gamma
    ax, ay = analytic_involutions(params)
    m = ax @ ay
    trace = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if _near(trace, 2.0, rel):
        return ReturnMapAnalysis(
            m, trace, det, (complex(1.0), complex(1.0)), FixedPointClass.NONHYPERBOLIC_UNIT
        )
    if _near(trace, -2.0, rel):
        return ReturnMapAnalysis(
            m,
            trace,
            det,
            (complex(-1.0), complex(-1.0)),
            FixedPointClass.PARABOLIC_BOUNDARY,
        )
    if abs(trace) < 2.0:
        tau = math.acos(trace / 2.0)
        vals = (complex(trace / 2.0, -math.sin(tau)), complex(trace / 2.0, math.sin(tau)))
        return ReturnMapAnalysis(
            m, trace, det, vals, FixedPointClass.NONHYPERBOLIC_COMPLEX, tau=tau
        )
    # Saddle: compute the eigenvalue pair stably through the unit product.
    s = math.sqrt(trace * trace - 4.0)
    big = math.copysign((abs(trace) + s) / 2.0, trace)
    small = math.copysign(2.0 / (abs(trace) + s), trace)
    v_small = _eigvec(m, small)
    v_big = _eigvec(m, big)
    return ReturnMapAnalysis(
        m,
        trace,
        det,
        (complex(small), complex(big)),
        FixedPointClass.SADDLE,
        v_contracting=v_small,
        v_expanding=v_big,
        location_contracting=_locate(v_small, rel),
        location_expanding=_locate(v_big, rel),
    )


def demelo_palis(analysis):
    """Saddle moduli ratio log|contracting| / log|expanding|.

    The return map is a product of two involutions, so its determinant is 1
    and the ratio is -1 for every two-fold saddle.
    """
    if analysis.fixed_point_class is not FixedPointClass.SADDLE:
        raise PreconditionError("the invariant is defined for saddles only")
    lam, mu = analysis.eigenvalues  # |lam| < 1 < |mu|
    return math.log(abs(lam)) / math.log(abs(mu))


@dataclass
class ModuliInfo:
    """Continuous invariant of a non-hyperbolic T-singularity.

    ``tau`` is the argument of the unit-circle eigenvalues; nearby systems
    are organized in codimension-one leaves of constant ``tau``, and systems
    on different leaves are not topologically equivalent.
    """

    tau: float
    tau_over_pi: float
    convergents: list  # rational approximations (p, q) of tau/pi, q <= 1e6
    leaf_id: float


def _convergents(x, max_den=10**6):
    """Continued-fraction convergents p/q of x with q <= max_den."""
    out = []
    h_prev, h_prev2 = 1, 0
    k_prev, k_prev2 = 0, 1
    value = x
    for _ in range(64):
        a = math.floor(value)
        h = a * h_prev + h_prev2
        k = a * k_prev + k_prev2
        if k > max_den:
            break
        if h != 0 or k != 1:  # skip the trivial 0/1 head for x in (0, 1)
            out.append((int(h), int(k)))
        h_prev2, h_prev = h_prev, h
        k_prev2, k_prev = k_prev, k
        frac = value - a
        if frac < 1e-15:
            break
        value = 1.0 / frac
    return out


def moduli_info(analysis):
    if analysis.fixed_point_class is not FixedPointClass.NONHYPERBOLIC_COMPLEX:
        raise PreconditionError("moduli are defined for the complex-eigenvalue case")
    tau = analysis.tau
    ratio = tau / math.pi
    return ModuliInfo(tau=tau, tau_over_pi=ratio, convergents=_convergents(ratio),
                      leaf_id=tau)


# ---------------------------------------------------------------------------
# Stability verdicts


class VerdictKind(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    BOUNDARY_DEGENERATE = "boundary-degenerate"


class InstabilityReason(Enum):
    NON_HYPERBOLIC_RETURN_MAP = "non-hyperbolic-return-map"
    INVARIANT_MANIFOLD_IN_SLIDING = "invariant-manifold-in-sliding"
    SLIDING_BIFURCATION = "sliding-bifurcation"
    TRANSVERSALITY_FAILURE = "transversality-failure"
    MODULI_FOLIATION = "moduli-foliation"


@dataclass
class Reason:
    kind: InstabilityReason
    which: str | None = None  # failed condition for transversality failures
    tau: float | None = None
    detail: str = ""


@dataclass
class StabilityVerdict:
    kind: VerdictKind
    reason: Reason | None = None
    class_descriptor: tuple | None = None
    witness: str | None = None
    moduli: ModuliInfo | None = None
    analysis: ReturnMapAnalysis | None = None
    params: NormalParameters | None = None

    def stable(self):
        return self.kind is VerdictKind.STABLE


def _sign(v):
    return int(math.copysign(1.0, v))


def _tsingularity_verdict(params, rel):
    analysis = return_map_analysis(params, rel)
    cls = analysis.fixed_point_class
    if cls is FixedPointClass.NONHYPERBOLIC_UNIT:
        return StabilityVerdict(
            VerdictKind.BOUNDARY_DEGENERATE,
            witness="unit-eigenvalue boundary: alpha*beta equals gamma within tolerance",
            analysis=analysis,
            params=params,
        )
    if cls is FixedPointClass.PARABOLIC_BOUNDARY:
        return StabilityVerdict(
            VerdictKind.UNSTABLE,
            reason=Reason(
                InstabilityReason.NON_HYPERBOLIC_RETURN_MAP,
                detail="double eigenvalue -1 (alpha*beta = 0 boundary)",
            ),
            analysis=analysis,
            params=params,
        )
    if cls is FixedPointClass.NONHYPERBOLIC_COMPLEX:
        moduli = moduli_info(analysis)
        return StabilityVerdict(
            VerdictKind.UNSTABLE,
            reason=Reason(
                InstabilityReason.NON_HYPERBOLIC_RETURN_MAP,
                tau=analysis.tau,
                detail="unit-circle complex eigenvalues; tau labels the moduli leaf",
            ),
            moduli=moduli,
            analysis=analysis,
            params=params,
        )
    locs = (analysis.location_contracting, analysis.location_expanding)
    if all(loc is EigvecLocation.IN_CROSSING for loc in locs):
        return StabilityVerdict(
            VerdictKind.STABLE,
            class_descriptor=(
                "T-singularity",
                "saddle-with-crossing-manifolds",
                _sign(params.alpha),
                _sign(params.beta),
            ),
            analysis=analysis,
            params=params,
        )
    if any(loc is EigvecLocation.ON_TANGENCY for loc in locs):
        return StabilityVerdict(
            VerdictKind.BOUNDARY_DEGENERATE,
            witness="saddle eigenvector on the tangency set",
            analysis=analysis,
            params=params,
        )
    return StabilityVerdict(
        VerdictKind.UNSTABLE,
        reason=Reason(
            InstabilityReason.INVARIANT_MANIFOLD_IN_SLIDING,
            detail="a saddle manifold meets the sliding region",
        ),
        analysis=analysis,
        params=params,
    )


def _visible_verdict(params, rel):
    tag = classify_hyperbolic_region(params.alpha, params.beta, params.gamma, rel)
    if tag is SlidingRegionTag.BIFURCATION_BOUNDARY:
        return StabilityVerdict(
            VerdictKind.BOUNDARY_DEGENERATE,
            witness="on the sliding-node boundary (alpha*beta = gamma, alpha > 0)",
            params=params,
        )
    return StabilityVerdict(
        VerdictKind.STABLE,
        class_descriptor=("visible-two-fold", tag.value),
        params=params,
    )


def _parabolic_core_verdict(params, original, rel):
    """Verdict in invisible-visible coordinates (``original`` keeps the
    caller's parameters for reporting)."""
    a, b, g = params.alpha, params.beta, params.gamma
    tag = classify_parabolic_region(a, b, g, rel)
    if tag is SlidingRegionTag.BIFURCATION_BOUNDARY:
        if _strictly_outside_parabolic(a, b, g):
            return StabilityVerdict(
                VerdictKind.UNSTABLE,
                reason=Reason(
                    InstabilityReason.SLIDING_BIFURCATION,
                    detail="sliding dynamics outside all generic regions",
                ),
                params=original,
            )
        return StabilityVerdict(
            VerdictKind.BOUNDARY_DEGENERATE,
            witness="on a sliding-region boundary",
            params=original,
        )
    coeffs = parabolic_transversality(params)
    if _near(a, 0.0, rel):
        return StabilityVerdict(
            VerdictKind.UNSTABLE,
            reason=Reason(
                InstabilityReason.TRANSVERSALITY_FAILURE,
                which="alpha",
                detail="fold image of the visible tangency line is tangent to it",
            ),
            params=original,
        )
    if _near(coeffs.T_coeff, 0.0, rel):
        return StabilityVerdict(
            VerdictKind.UNSTABLE,
            reason=Reason(
                InstabilityReason.TRANSVERSALITY_FAILURE,
                which="T",
                detail="sliding field tangent to the fold image curve",
            ),
            params=original,
        )
    if a > 0.0 and _near(a + b, 0.0, rel):
        return StabilityVerdict(
            VerdictKind.UNSTABLE,
            reason=Reason(
                InstabilityReason.TRANSVERSALITY_FAILURE,
                which="D",
                detail="sliding field parallel to its fold transport on the connection region",
            ),
            params=original,
        )
    return StabilityVerdict(
        VerdictKind.STABLE,
        class_descriptor=(
            "parabolic-two-fold",
            tag.value,
            _sign(a),
            _sign(a + b),
            _sign(coeffs.T_coeff),
        ),
        params=original,
    )


def _strictly_outside_parabolic(a, b, g, margin=1e-7):
    """True when (a, b, g) lies in the open complement of the four regions.

    Below the hyperbola a*b = g every parameter is covered by a region, so
    the complement is the wedge {a*b > g, b - a > -2 sqrt(-g)} together with
    the boundaries; only the open wedge counts as strictly outside.
    """
    ab = a * b
    root = 2.0 * math.sqrt(-g)
    w = (b - a) + root
    if abs(ab - g) <= margin * (1.0 + abs(ab) + abs(g)):
        return False
    if abs(w) <= margin * (1.0 + abs(b - a) + root):
        return False
    if ab < g or w < 0.0:
        return False
    return True


def verdict_from_params(params, rel=BOUNDARY_BAND):
    """Structural-stability verdict of a two-fold from its normal parameters."""
    sub = params.subtype
    if sub is FoldFoldSubtype.INVISIBLE:
        return _tsingularity_verdict(params, rel)
    if sub is FoldFoldSubtype.VISIBLE_VISIBLE:
        return _visible_verdict(params, rel)
    if sub is FoldFoldSubtype.INVISIBLE_VISIBLE:
        return _parabolic_core_verdict(params, params, rel)
    return _parabolic_core_verdict(mirror_parameters(params), params, rel)


def stability_verdict(system, point, tol=None, rel=BOUNDARY_BAND):
    """Verdict at an arbitrary surface point.

    Crossing points, regular sliding points, hyperbolic pseudo-equilibria and
    fold/cusp-regular tangencies are stable; two-folds dispatch on the normal
    parameters; degenerate tangencies report a boundary verdict.
    """
    tol = default_tolerance(system) if tol is None else tol
    cls = classify_point(system, point, tol)
    if cls.kind is SigmaKind.CROSSING:
        return StabilityVerdict(
            VerdictKind.STABLE, class_descriptor=("regular-regular", "crossing")
        )
    if cls.kind in (SigmaKind.STABLE_SLIDING, SigmaKind.UNSTABLE_SLIDING):
        return _sliding_point_verdict(system, point, cls, tol)
    info = tangency_type(system, point, tol)
    if info.ttype in (
        TangencyType.FOLD_REGULAR,
        TangencyType.REGULAR_FOLD,
        TangencyType.CUSP_REGULAR,
        TangencyType.REGULAR_CUSP,
    ):
        return StabilityVerdict(
            VerdictKind.STABLE, class_descriptor=("tangential", info.ttype.value)
        )
    if info.ttype is TangencyType.DEGENERATE:
        return StabilityVerdict(
            VerdictKind.BOUNDARY_DEGENERATE,
            witness=f"degenerate tangency: {info.detail}",
        )
    return verdict_from_params(normal_parameters(system, point, tol), rel)


def _sliding_point_verdict(system, point, cls, tol):
    fld = normalized_sliding_field(system)
    value = fld.eval(point[0], point[1])
    scale = 1.0 + max(fld.px.coeff_scale(), fld.py.coeff_scale())
    if math.hypot(*value) > tol * scale:
        return StabilityVerdict(
            VerdictKind.STABLE,
            class_descriptor=("regular-regular", cls.kind.value, "regular-sliding"),
        )
    xf, yf = cls.witness
    jac = fld.jacobian_at(point[0], point[1]) / (yf - xf)
    eig = linear_eigensystem(jac)
    t = jac[0, 0] + jac[1, 1]
    d = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
    jac_scale = 1.0 + float(np.max(np.abs(jac)))
    hyperbolic = abs(d) > tol * jac_scale**2 and (
        t * t - 4.0 * d >= 0.0 or abs(t) > tol * jac_scale
    )
    if hyperbolic:
        return StabilityVerdict(
            VerdictKind.STABLE,
            class_descriptor=(
                "regular-regular",
                cls.kind.value,
                "hyperbolic-pseudo-equilibrium",
                _sign(d),
                _sign(t) if d > 0 else 0,
            ),
        )
    return StabilityVerdict(
        VerdictKind.UNSTABLE,
        reason=Reason(
            InstabilityReason.SLIDING_BIFURCATION,
            detail=f"non-hyperbolic pseudo-equilibrium (eigenvalues {eig.values})",
        ),
    )


# ---------------------------------------------------------------------------
# Connection region and parabolic transversality coefficients


@dataclass
class ConnectionReport:
    exists: bool | None
    degenerate: bool
    direction: tuple
    description: str


def connection_region(params, rel=BOUNDARY_BAND):
    """Do orbits of the invisible fold connect the two sliding regions?

    Connections exist precisely when the effective ``alpha`` is positive: the
    involution then maps the visible fold's tangency line into the sliding
    region, carrying a wedge of unstable sliding into stable sliding.  At
    ``alpha = 0`` the image is tangent to the line and the question
    degenerates.
    """
    if params.subtype is FoldFoldSubtype.VISIBLE_INVISIBLE:
        params = mirror_parameters(params)
    if params.subtype is not FoldFoldSubtype.INVISIBLE_VISIBLE:
        raise PreconditionError("connection region applies to parabolic two-folds")
    a = params.alpha
    direction = (-2.0 * a, -1.0)
    if _near(a, 0.0, rel):
        return ConnectionReport(
            exists=None,
            degenerate=True,
            direction=direction,
            description="fold image tangent to the visible tangency line (alpha = 0)",
        )
    exists = a > 0.0
    side = "inside" if exists else "outside"
    return ConnectionReport(
        exists=exists,
        degenerate=False,
        direction=direction,
        description=(
            f"fold image of the visible tangency line points along {direction}, "
            f"{side} the sliding region"
        ),
    )


@dataclass
class TransversalityCoefficients:
    D_coeff: float
    T_coeff: float


def parabolic_transversality(params):
    """Leading coefficients of the two parabolic transversality functions.

    ``D_coeff`` scales the determinant of the sliding field against its fold
    transport (leading order y^2); ``T_coeff`` scales the pairing of the
    sliding field with the fold image of the visible tangency line (leading
    order y).  Both must be nonzero for structural stability.
    """
    if params.subtype is FoldFoldSubtype.VISIBLE_INVISIBLE:
        params = mirror_parameters(params)
    if params.subtype is not FoldFoldSubtype.INVISIBLE_VISIBLE:
        raise PreconditionError("parabolic coefficients need a parabolic two-fold")
    a, b, g = params.alpha, params.beta, params.gamma
    return TransversalityCoefficients(
        D_coeff=-2.0 * (a + b) * (a * b - g),
        T_coeff=2.0 * a * (a + b) - g,
    )


# ---------------------------------------------------------------------------
# Numeric diagnostics: invariant double cone and foliation web


@dataclass
class DiaboloReport:
    applicable: bool
    reason: str = ""
    eigenvectors_in_crossing: bool = False
    reversibility_ok: bool = False
    reversibility_ratios: list | None = None
    seeds_run: int = 0
    violations: int = 0


def _sample_unstable_sliding_seeds(system, point, n, radius, rng, tol):
    xf_fn = system.xf.compiled()
    yf_fn = system.yf.compiled()
    seeds = []
    attempts = 0
    while len(seeds) < n and attempts < 200 * n:
        attempts += 1
        theta = rng.uniform(0.0, 2.0 * math.pi)
        r = radius * (0.2 + 0.8 * rng.random())
        q = (point[0] + r * math.cos(theta), point[1] + r * math.sin(theta))
        if xf_fn(q[0], q[1], 0.0) > tol and yf_fn(q[0], q[1], 0.0) < -tol:
            seeds.append(q)
    return seeds


def diabolo_check(system, point, cfg=None, n_seeds=50, seed=0, radius=0.05):
    """Checks on the invariant double cone of a stable T-singularity.

    (i) both saddle eigendirections lie in the crossing region; (ii) the
    numeric X-fold map carries points near the expanding manifold onto the
    contracting one to second order (reversibility); (iii) iterated
    unstable-sliding seeds never enter stable sliding before leaving the
    analysis window.
    """
    cfg = cfg or IntegratorConfig()
    params = normal_parameters(system, point)
    if params.subtype is not FoldFoldSubtype.INVISIBLE:
        return DiaboloReport(False, reason="not a T-singularity")
    verdict = verdict_from_params(params)
    if not verdict.stable():
        return DiaboloReport(False, reason=f"not stable: {verdict.kind.value}")
    analysis = verdict.analysis
    locs_ok = (
        analysis.location_contracting is EigvecLocation.IN_CROSSING
        and analysis.location_expanding is EigvecLocation.IN_CROSSING
    )

    tol = default_tolerance(system)
    ratios = []
    v_u = analysis.v_expanding
    v_s = analysis.v_contracting
    for r in (radius / 4, radius / 2, radius):
        for sign in (1.0, -1.0):
            q = (point[0] + sign * r * v_u[0], point[1] + sign * r * v_u[1])
            w = fold_map_numeric(system, "X", q, cfg)
            d = abs(
                v_s[0] * (w[1] - point[1]) - v_s[1] * (w[0] - point[0])
            )  # distance to the contracting line
            ratios.append(d / (r * r))
    finite = [r for r in ratios if math.isfinite(r)]
    rev_ok = bool(finite) and (
        max(finite) <= 1e-3 or max(finite) <= 10.0 * (1.0 + min(finite))
    )

    rng = np.random.default_rng(seed)
    xf_fn = system.xf.compiled()
    yf_fn = system.yf.compiled()
    escape = 0.75 * cfg.box.scale()
    seeds = _sample_unstable_sliding_seeds(system, point, n_seeds, radius, rng, tol)
    violations = 0
    for q in seeds:
        current = q
        for _ in range(120):
            try:
                current = return_map_numeric(system, current, cfg)
            except IntegrationFailure:
                break  # an arc left the analysis window
            dx = current[0] - point[0]
            dy = current[1] - point[1]
            if max(abs(dx), abs(dy)) > escape:
                break
            xf = xf_fn(current[0], current[1], 0.0)
            yf = yf_fn(current[0], current[1], 0.0)
            if xf < -tol and yf > tol:
                violations += 1
                break
    return DiaboloReport(
        applicable=True,
        eigenvectors_in_crossing=locs_ok,
        reversibility_ok=rev_ok,
        reversibility_ratios=ratios,
        seeds_run=len(seeds),
        violations=violations,
    )


@dataclass
class WebScanReport:
    applicable: bool
    reason: str = ""
    estimates: dict | None = None  # (i, j, branch) -> fitted quadratic coefficient
    transversal_pairs: list | None = None
    radii: tuple = ()


def web_scan(system, point, n=2, cfg=None, radii=None):
    """Pairwise transversality of return-map transports of the sliding field.

    For a saddle T-singularity with an invariant manifold inside the sliding
    region, the even return-map iterates push the normalized sliding field
    onto overlapping domains; the determinant of any two transports vanishes
    to second order along the eigendirections, and its quadratic coefficient
    decides transversality of the resulting foliations.
    """
    cfg = cfg or IntegratorConfig()
    params = normal_parameters(system, point)
    if params.subtype is not FoldFoldSubtype.INVISIBLE:
        return WebScanReport(False, reason="not a T-singularity")
    analysis = return_map_analysis(params)
    if analysis.fixed_point_class is not FixedPointClass.SADDLE:
        return WebScanReport(False, reason="return map is not a saddle")
    in_sliding = [
        loc
        for loc in (analysis.location_contracting, analysis.location_expanding)
        if loc is EigvecLocation.IN_SLIDING
    ]
    if not in_sliding:
        return WebScanReport(False, reason="no invariant manifold in the sliding region")
    if n < 1:
        return WebScanReport(True, estimates={}, transversal_pairs=[], radii=())

    fld = normalized_sliding_field(system)
    f0 = fld.compiled()
    px, py = point[0], point[1]

    def phi2(q):
        return return_map_numeric(system, return_map_numeric(system, q, cfg), cfg)

    def phi2_inv(q):
        return inverse_return_map_numeric(
            system, inverse_return_map_numeric(system, q, cfg), cfg
        )

    def transported(i, q):
        """(phi^{2i})-pushforward of the sliding field evaluated at q."""
        base = q
        for _ in range(i):
            base = phi2_inv(base)
        vec = np.array(f0(base[0], base[1]))
        pt = base
        for _ in range(i):
            jac = jacobian_numeric(phi2, pt, h=1e-4)
            vec = jac @ vec
            pt = phi2(pt)
        return vec

    def fit_quadratic(ts, ds):
        # d(t) ~ A t^2 + B t^3: least squares for (A, B); returns A and
        # the relative residual of the fit.
        M = np.array([[t * t, t * t * t] for t in ts])
        coef, *_ = np.linalg.lstsq(M, np.array(ds), rcond=None)
        resid = np.linalg.norm(M @ coef - np.array(ds))
        scale = np.linalg.norm(ds) + 1e-300
        return coef[0], resid / scale

    # Backward iteration expands along the contracting manifold by the
    # squared expanding eigenvalue per step, so the sampling radii must
    # shrink accordingly to keep the pulled-back base points in the chart.
    mu = max(abs(v) for v in analysis.eigenvalues)
    shrink = min(1.0, 0.25 / mu ** (2 * n))
    if radii is None:
        base_radii = tuple(shrink * r for r in (0.004, 0.008, 0.016, 0.032))
    else:
        base_radii = tuple(radii)
    directions = [("contracting", analysis.v_contracting),
                  ("expanding", analysis.v_expanding)]
    estimates = {}
    for widen in (1.0, 3.0):
        try:
            estimates = {}
            ok = True
            for label, v in directions:
                for i in range(0, n + 1):
                    for j in range(i + 1, n + 1):
                        ts, ds = [], []
                        for r in base_radii:
                            t = widen * r
                            q = (px + t * v[0], py + t * v[1])
                            fi = transported(i, q)
                            fj = transported(j, q)
                            ds.append(fi[0] * fj[1] - fi[1] * fj[0])
                            ts.append(t)
                        a_est, resid = fit_quadratic(ts, ds)
                        estimates[(i, j, label)] = a_est
                        if resid > 0.5:
                            ok = False
            if ok:
                break
        except IntegrationFailure:
            ok = False
    else:
        raise PreconditionError("web scan fit unstable even after widening radii")
    scale = 1.0 + max(fld.px.coeff_scale(), fld.py.coeff_scale())
    transversal = sorted(
        {(i, j) for (i, j, _), a in estimates.items() if abs(a) > 1e-6 * scale}
    )
    return WebScanReport(
        True,
        estimates=estimates,
        transversal_pairs=transversal,
        radii=tuple(widen * r for r in base_radii),
    )


# ---------------------------------------------------------------------------
# Aggregated report


@dataclass
class FoldFoldReport:
    params: NormalParameters
    region: SlidingRegionTag
    claim: int
    verdict: StabilityVerdict
    analysis: ReturnMapAnalysis | None
    moduli: ModuliInfo | None


def report_from_params(params, rel=BOUNDARY_BAND):
    verdict = verdict_from_params(params, rel)
    region = sliding_region_class(params, rel)
    return FoldFoldReport(
        params=params,
        region=region,
        claim=region.claim.value,
        verdict=verdict,
        analysis=verdict.analysis,
        moduli=verdict.moduli,
    )


def foldfold_report(system, point, tol=None, rel=BOUNDARY_BAND):
    """Full two-fold report for a surface point of a concrete system."""
    params = normal_parameters(system, point, tol)
    return report_from_params(params, rel)
