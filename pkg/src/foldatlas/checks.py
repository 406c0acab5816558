"""Analytic-vs-numeric verification suites.

Each check pits an independent route against the implementation: numeric
flights against closed-form involutions, random draws against sign tables,
sweeps against analytic region predicates.  The CLI ``verify`` subcommand
runs reduced sample counts; the acceptance tests run the full ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IntegrationFailure
from .foldfold import (
    EigvecLocation,
    FixedPointClass,
    demelo_palis,
    make_parameters,
    return_map_analysis,
    verdict_from_params,
)
from .integrator import (
    IntegratorConfig,
    fold_map_numeric,
    jacobian_numeric,
    return_map_numeric,
    filippov_trajectory,
)
from .sliding import (
    SlidingRegionTag,
    foldfold_sliding_linearization,
    normalized_sliding_field,
    sliding_region_class,
)
from .algebra import Poly3, VectorField3
from .system import PiecewiseSystem, build_normal_form


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    threshold: float
    detail: str = ""

    def row(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name}: residual {self.residual:.3e} "
            f"(threshold {self.threshold:.3e}) {self.detail}"
        )


# ---------------------------------------------------------------------------
# Return-map formula vs numeric Jacobian


def check_return_map_grid(
    n_alpha=50,
    n_beta=50,
    gammas=(0.5, 1.0, 1.5, 2.0, 3.0),
    h=1e-3,
    cfg=None,
    det_tol=1e-12,
    entry_tol=1e-4,
    min_fraction=0.99,
):
    """Closed-form return-map matrix: det == 1, and the central-difference
    Jacobian of the integrated return map matches it entrywise."""
    cfg = cfg or IntegratorConfig()
    alphas = np.linspace(-3.0, 3.0, n_alpha)
    betas = np.linspace(-3.0, 3.0, n_beta)
    worst_det = 0.0
    worst_entry = 0.0
    matched = 0
    returned = 0
    for g in gammas:
        for a in alphas:
            for b in betas:
                params = make_parameters(a, b, g, -1.0)
                analysis = return_map_analysis(params)
                worst_det = max(worst_det, abs(analysis.det - 1.0))
                system = build_normal_form(a, b, g, -1.0)
                try:
                    jac = jacobian_numeric(
                        lambda q: return_map_numeric(system, q, cfg), (0.0, 0.0), h
                    )
                except IntegrationFailure:
                    continue
                returned += 1
                diff = float(np.max(np.abs(jac - analysis.matrix)))
                if diff <= entry_tol:
                    matched += 1
                worst_entry = max(worst_entry, diff)
    total = n_alpha * n_beta * len(gammas)
    fraction = matched / returned if returned else 0.0
    results = [
        CheckResult(
            "return-map determinant",
            worst_det <= det_tol,
            worst_det,
            det_tol,
            f"{total} grid points",
        ),
        CheckResult(
            "return-map numeric Jacobian",
            fraction >= min_fraction and returned > 0,
            1.0 - fraction,
            1.0 - min_fraction,
            f"matched {matched}/{returned} (worst entry diff {worst_entry:.3e})",
        ),
    ]
    return results


# ---------------------------------------------------------------------------
# Saddle dichotomy and eigenvector locations


def check_saddle_dichotomy(n=100000, seed=0, margin=1e-6):
    """Hyperbolicity of the return map matches sign(a*b*(a*b - g)) exactly."""
    rng = np.random.default_rng(seed)
    disagreements = 0
    count = 0
    while count < n:
        a = rng.uniform(-3.0, 3.0)
        b = rng.uniform(-3.0, 3.0)
        g = rng.uniform(0.2, 3.0)
        crit = a * b * (a * b - g)
        if abs(crit) <= margin:
            continue
        count += 1
        analysis = return_map_analysis(make_parameters(a, b, g, -1.0))
        is_saddle = analysis.fixed_point_class is FixedPointClass.SADDLE
        if is_saddle != (crit > 0.0):
            disagreements += 1
    return [
        CheckResult(
            "saddle dichotomy",
            disagreements == 0,
            float(disagreements),
            0.0,
            f"{count} draws",
        )
    ]


_CELL_EXPECTATION = {
    # (sign alpha, sign beta) -> (contracting location, expanding location)
    (1, 1): (EigvecLocation.IN_SLIDING, EigvecLocation.IN_SLIDING),
    (1, -1): (EigvecLocation.IN_CROSSING, EigvecLocation.IN_SLIDING),
    (-1, 1): (EigvecLocation.IN_SLIDING, EigvecLocation.IN_CROSSING),
    (-1, -1): (EigvecLocation.IN_CROSSING, EigvecLocation.IN_CROSSING),
}


def _draw_saddle_in_cell(rng, sa, sb, margin=1e-6):
    while True:
        a = sa * rng.uniform(0.05, 3.0)
        b = sb * rng.uniform(0.05, 3.0)
        g = rng.uniform(0.2, 3.0)
        if a * b * (a * b - g) > margin:
            return a, b, g


def check_eigenvector_locations(n_per_cell=10000, seed=0):
    """Saddle eigenvector placement agrees with the sign-cell table."""
    rng = np.random.default_rng(seed)
    mismatches = 0
    total = 0
    for (sa, sb), expected in _CELL_EXPECTATION.items():
        for _ in range(n_per_cell):
            a, b, g = _draw_saddle_in_cell(rng, sa, sb)
            analysis = return_map_analysis(make_parameters(a, b, g, -1.0))
            total += 1
            got = (analysis.location_contracting, analysis.location_expanding)
            if got != expected:
                mismatches += 1
    return [
        CheckResult(
            "eigenvector location table",
            mismatches == 0,
            float(mismatches),
            0.0,
            f"{total} saddle draws over 4 sign cells",
        )
    ]


# ---------------------------------------------------------------------------
# Involution ground truth


def check_involution_ground_truth(
    n_alpha=20, n_points=40, cfg=None, seed=0, tol=1e-7, double_tol=1e-6
):
    """Numeric X-fold map against (x - 2*a*y, -y), and its involutivity."""
    cfg = cfg or IntegratorConfig()
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_double = 0.0
    for a in np.linspace(-3.0, 3.0, n_alpha):
        system = build_normal_form(a, -1.0, 1.0, -1.0)
        for _ in range(n_points):
            r = 0.1 * math.sqrt(rng.random())
            th = rng.uniform(0.0, 2.0 * math.pi)
            q = (r * math.cos(th), r * math.sin(th))
            image = fold_map_numeric(system, "X", q, cfg)
            exact = (q[0] - 2.0 * a * q[1], -q[1])
            worst = max(worst, math.hypot(image[0] - exact[0], image[1] - exact[1]))
            back = fold_map_numeric(system, "X", image, cfg)
            worst_double = max(
                worst_double, math.hypot(back[0] - q[0], back[1] - q[1])
            )
    return [
        CheckResult("fold-map ground truth", worst <= tol, worst, tol),
        CheckResult(
            "fold-map involutivity", worst_double <= double_tol, worst_double, double_tol
        ),
    ]


# ---------------------------------------------------------------------------
# Sliding spectra per region


def _draw_re1(rng):
    while True:
        g = rng.uniform(0.2, 3.0)
        a = -rng.uniform(0.05, 3.0)
        b = -rng.uniform(0.05, 3.0)
        if a * b - g > 1e-6:
            return a, b, g, -1.0, SlidingRegionTag.RE1
def _draw_rh1(rng):
    while True:
        g = rng.uniform(-3.0, -0.2)
        a = rng.uniform(0.05, 3.0)
        b = rng.uniform(-3.0, -0.05)
        if a * b - g < -1e-6:
            return a, b, g, 1.0, SlidingRegionTag.RH1
def _draw_rp1(rng):
    while True:
        g = rng.uniform(-3.0, -0.2)
        a = -rng.uniform(0.05, 3.0)
        b = (g / a) * rng.uniform(1.1, 3.0)
        if abs(b) > 3.0 or a * b - g > -1e-6:
            continue
        return a, b, g, -1.0, SlidingRegionTag.RP1


def check_region_spectra(n_per_region=10000, seed=0):
    """Sign table of the sliding linearization per region.

    RE1: stable node (det > 0, trace < 0, real); RH1: its time reversal
    (det > 0, trace > 0, real); RP1: saddle (det < 0).
    """
    rng = np.random.default_rng(seed)
    violations = 0
    total = 0
    for draw, want in (
        (_draw_re1, ("node-", None)),
        (_draw_rh1, ("node+", None)),
        (_draw_rp1, ("saddle", None)),
    ):
        for _ in range(n_per_region):
            a, b, g, d, tag = draw(rng)
            params = make_parameters(a, b, g, d)
            if sliding_region_class(params) is not tag:
                violations += 1
                total += 1
                continue
            m = foldfold_sliding_linearization(params)
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            tr = m[0, 0] + m[1, 1]
            disc = tr * tr - 4.0 * det
            total += 1
            if want[0] == "node-" and not (det > 0 and tr < 0 and disc > 0):
                violations += 1
            elif want[0] == "node+" and not (det > 0 and tr > 0 and disc > 0):
                violations += 1
            elif want[0] == "saddle" and not det < 0:
                violations += 1
    return [
        CheckResult(
            "region spectra sign table",
            violations == 0,
            float(violations),
            0.0,
            f"{total} draws over RE1/RH1/RP1",
        )
    ]


# ---------------------------------------------------------------------------
# Rescaling invariance


def _draw_any_foldfold(rng, margin=1e-4):
    """Draw parameters of any subtype, bounded away from decision boundaries."""
    while True:
        d = rng.choice((-1.0, 1.0))
        g = rng.choice((-1.0, 1.0)) * rng.uniform(0.2, 3.0)
        a = rng.uniform(-3.0, 3.0)
        b = rng.uniform(-3.0, 3.0)
        if min(abs(a), abs(b)) < 1e-3:
            continue
        ab = a * b
        clear = (
            abs(ab - g) > margin
            and abs(ab) > margin
            and abs(a + b) > margin
            and (g > 0 or abs((b - a) + 2.0 * math.sqrt(-g)) > margin)
            and abs(2.0 * a * (a + b) - g) > margin
        )
        if g > 0 and d > 0:
            # visible-invisible: the mirrored triple must clear margins too
            am, bm = -b / math.sqrt(g), a / math.sqrt(g)
            clear = clear and (
                abs(am * bm + 1.0) > margin
                and abs(am + bm) > margin
                and abs((bm - am) + 2.0) > margin
                and abs(2.0 * am * (am + bm) + 1.0) > margin
            )
        if clear:
            return make_parameters(a, b, g, d)


def _verdict_signature(verdict):
    reason = None
    if verdict.reason is not None:
        reason = (verdict.reason.kind, verdict.reason.which)
    return (verdict.kind, reason, verdict.class_descriptor)


def check_rescaling_invariance(n=10000, factors=(0.1, 0.5, 2.0, 10.0), seed=0):
    """Verdict and region tag survive (a, b, g) -> (e a, e b, e^2 g)."""
    rng = np.random.default_rng(seed)
    changes = 0
    for _ in range(n):
        params = _draw_any_foldfold(rng)
        base = (
            sliding_region_class(params),
            _verdict_signature(verdict_from_params(params)),
        )
        for e in factors:
            scaled = make_parameters(
                e * params.alpha, e * params.beta, e * e * params.gamma, params.delta
            )
            got = (
                sliding_region_class(scaled),
                _verdict_signature(verdict_from_params(scaled)),
            )
            if got != base:
                changes += 1
    return [
        CheckResult(
            "rescaling invariance",
            changes == 0,
            float(changes),
            0.0,
            f"{n} draws x {len(factors)} factors",
        )
    ]


# ---------------------------------------------------------------------------
# Saddle moduli ratio


def check_demelo_palis(n=10000, seed=0, tol=1e-12):
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    while count < n:
        a = rng.uniform(-3.0, 3.0)
        b = rng.uniform(-3.0, 3.0)
        g = rng.uniform(0.2, 3.0)
        if a * b * (a * b - g) <= 1e-6:
            continue
        count += 1
        analysis = return_map_analysis(make_parameters(a, b, g, -1.0))
        worst = max(worst, abs(demelo_palis(analysis) + 1.0))
    return [
        CheckResult("saddle moduli ratio = -1", worst <= tol, worst, tol, f"{n} draws")
    ]


# ---------------------------------------------------------------------------
# Diabolo invariance


def _draw_stable_elliptic(rng, margin=1e-3):
    while True:
        g = rng.uniform(0.2, 3.0)
        a = -rng.uniform(0.05, 3.0)
        b = -rng.uniform(0.05, 3.0)
        if a * b - g > margin:
            return a, b, g


def check_diabolo(
    n_draws=100, n_systems=10, seeds_per_system=100, cfg=None, seed=0
):
    """Stable T-singularities: eigenvectors in the crossing region and no
    unstable-to-stable sliding communication under return-map iteration."""
    cfg = cfg or IntegratorConfig()
    rng = np.random.default_rng(seed)
    bad_vectors = 0
    draws = []
    for _ in range(n_draws):
        a, b, g = _draw_stable_elliptic(rng)
        draws.append((a, b, g))
        analysis = return_map_analysis(make_parameters(a, b, g, -1.0))
        if not (
            analysis.location_contracting is EigvecLocation.IN_CROSSING
            and analysis.location_expanding is EigvecLocation.IN_CROSSING
        ):
            bad_vectors += 1
    violations = 0
    seeds_run = 0
    stol = 1e-11
    # Iteration systems need a clear saddle margin so orbits leave the box
    # in a bounded number of return-map applications.
    iteration_draws = [t for t in draws if t[0] * t[1] - t[2] > 0.3][:n_systems]
    while len(iteration_draws) < n_systems:
        a, b, g = _draw_stable_elliptic(rng, margin=0.3)
        iteration_draws.append((a, b, g))
    for a, b, g in iteration_draws:
        system = build_normal_form(a, b, g, -1.0)
        for _ in range(seeds_per_system):
            q = (-rng.uniform(0.01, 0.1), -rng.uniform(0.01, 0.1))
            seeds_run += 1
            current = q
            for _ in range(200):
                try:
                    current = return_map_numeric(system, current, cfg)
                except IntegrationFailure:
                    break  # an intermediate arc left the analysis window
                if max(abs(current[0]), abs(current[1])) > 1.0:
                    break
                # stable sliding in this chart is the open first quadrant
                if current[0] > stol and current[1] > stol:
                    violations += 1
                    break
    return [
        CheckResult(
            "diabolo eigenvectors in crossing",
            bad_vectors == 0,
            float(bad_vectors),
            0.0,
            f"{n_draws} stable draws",
        ),
        CheckResult(
            "diabolo sliding separation",
            violations == 0,
            float(violations),
            0.0,
            f"{seeds_run} iterated unstable-sliding seeds",
        ),
    ]


# ---------------------------------------------------------------------------
# Parabolic transversality coefficients


def check_parabolic_coefficients(n=30, seed=0, radius=1e-3, rel_tol=1e-5):
    """Numeric sampling of the two transversality functions on normal forms
    converges to -2(a+b)(ab-g) and 2a(a+b)-g."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        g = -rng.uniform(0.2, 3.0)
        a = rng.uniform(-2.0, 2.0)
        b = rng.uniform(-2.0, 2.0)
        d_exact = -2.0 * (a + b) * (a * b - g)
        t_exact = 2.0 * a * (a + b) - g
        if abs(d_exact) < 1e-2 or abs(t_exact) < 1e-2:
            continue
        system = build_normal_form(a, b, g, -1.0)
        fld = normalized_sliding_field(system)
        f0 = fld.compiled()
        ax = np.array([[1.0, -2.0 * a], [0.0, -1.0]])

        def d_num(x, y):
            v0 = np.array(f0(x, y))
            qx, qy = ax @ np.array([x, y])
            v1 = ax @ np.array(f0(qx, qy))
            return v0[0] * v1[1] - v0[1] * v1[0]

        for th in np.linspace(0.4, math.pi - 0.4, 7):
            x, y = radius * math.cos(th), radius * math.sin(th)
            worst = max(worst, abs(d_num(x, y) / (y * y) - d_exact) / abs(d_exact))
        for y in (radius, -radius):
            fx, fy = f0(-2.0 * a * y, -y)
            t_num = (fx * 1.0 + fy * (-2.0 * a)) / y
            worst = max(worst, abs(t_num - t_exact) / abs(t_exact))
    return [
        CheckResult(
            "parabolic transversality coefficients",
            worst <= rel_tol,
            worst,
            rel_tol,
            f"{n} parameter draws, radius {radius:g}",
        )
    ]


# ---------------------------------------------------------------------------
# Sliding tangency along trajectories


def _random_sliding_system(rng):
    def small_poly(scale, degree=1):
        terms = {}
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                if rng.random() < 0.6:
                    terms[(i, j, 0)] = scale * rng.uniform(-1.0, 1.0)
        return Poly3(terms)

    x_cz = Poly3.constant(-(0.3 + 0.7 * rng.random())) + small_poly(0.15)
    y_cz = Poly3.constant(0.3 + 0.7 * rng.random()) + small_poly(0.15)
    X = VectorField3(small_poly(0.8), small_poly(0.8), x_cz)
    Y = VectorField3(small_poly(0.8), small_poly(0.8), y_cz)
    return PiecewiseSystem(X, Y, name="random-sliding")


def check_sliding_tangency(n_sims=100, seed=0, cfg=None, tol=1e-10):
    """Along every sliding segment |z| and the sliding velocity's normal
    component stay at tolerance zero."""
    cfg = cfg or IntegratorConfig()
    rng = np.random.default_rng(seed)
    worst_z = 0.0
    worst_vz = 0.0
    sliding_samples = 0
    for _ in range(n_sims):
        system = _random_sliding_system(rng)
        xf = system.xf.compiled()
        yf = system.yf.compiled()
        xz = system.X.cz.compiled()
        yz = system.Y.cz.compiled()
        p0 = (
            rng.uniform(-0.5, 0.5),
            rng.uniform(-0.5, 0.5),
            rng.uniform(0.2, 0.6),
        )
        traj = filippov_trajectory(system, p0, 4.0, cfg)
        for seg in traj.segments:
            if seg.mode.value != "sliding":
                continue
            for point in seg.points:
                x, y, z = point
                sliding_samples += 1
                worst_z = max(worst_z, abs(z))
                a, c = xf(x, y, 0.0), yf(x, y, 0.0)
                vz = (c * xz(x, y, 0.0) - a * yz(x, y, 0.0)) / (c - a)
                worst_vz = max(worst_vz, abs(vz))
    return [
        CheckResult(
            "sliding |z|",
            worst_z <= tol and sliding_samples > 0,
            worst_z,
            tol,
            f"{sliding_samples} sliding samples",
        ),
        CheckResult(
            "sliding normal velocity",
            worst_vz <= tol and sliding_samples > 0,
            worst_vz,
            tol,
        ),
    ]


# ---------------------------------------------------------------------------
# Region atlases (figure structure reproduction)


def _return_map_cell(analysis):
    if analysis.fixed_point_class is not FixedPointClass.SADDLE:
        return "NH"
    pattern = (analysis.location_contracting, analysis.location_expanding)
    return {
        (EigvecLocation.IN_SLIDING, EigvecLocation.IN_SLIDING): "I",
        (EigvecLocation.IN_SLIDING, EigvecLocation.IN_CROSSING): "II",
        (EigvecLocation.IN_CROSSING, EigvecLocation.IN_CROSSING): "III",
        (EigvecLocation.IN_CROSSING, EigvecLocation.IN_SLIDING): "IV",
    }.get(pattern, "NH")


def _analytic_return_map_cell(a, b, g):
    ab = a * b
    if 0.0 <= ab <= g:
        return "NH"
    if a > 0 and b > 0:
        return "I"
    if a < 0 and b > 0:
        return "II"
    if a < 0 and b < 0:
        return "III"
    return "IV"


def _analytic_sliding_tag(a, b, g, d):
    if g > 0 and d < 0:  # elliptic
        return "RE1" if (a * b > g and a < 0 and b < 0) else "RE2"
    if g < 0 and d > 0:  # hyperbolic
        return "RH1" if (a * b < g and a > 0) else "RH2"
    # parabolic invisible-visible
    ab = a * b
    w = (b - a) + 2.0 * math.sqrt(-g)
    if ab < g:
        return "RP1" if a < 0 else "RP2"
    if w < 0.0:
        if a + b > 0:
            return "RP3"
        if a + b < 0:
            return "RP4"
    return "boundary"


def _cell_has_boundary(corner_vals):
    """True if any classification-boundary function changes sign over the
    cell corners (or vanishes there)."""
    for vals in corner_vals:
        if min(vals) <= 0.0 <= max(vals):
            return True
    return False


def check_return_map_atlas(resolution=200, gamma=1.0):
    """The (alpha, beta) sweep reproduces the four saddle cells plus the
    non-hyperbolic band, with boundaries localized within one grid cell."""
    alphas = np.linspace(-3.0, 3.0, resolution)
    betas = np.linspace(-3.0, 3.0, resolution)
    da = alphas[1] - alphas[0]
    db = betas[1] - betas[0]
    bad = 0
    seen = set()
    for a in alphas:
        for b in betas:
            analysis = return_map_analysis(make_parameters(a, b, gamma, -1.0))
            got = _return_map_cell(analysis)
            seen.add(got)
            want = _analytic_return_map_cell(a, b, gamma)
            if got == want:
                continue
            corners = [
                (a - da / 2, b - db / 2),
                (a + da / 2, b - db / 2),
                (a - da / 2, b + db / 2),
                (a + da / 2, b + db / 2),
            ]
            boundary_fns = [
                [ca for ca, cb in corners],
                [cb for ca, cb in corners],
                [ca * cb for ca, cb in corners],
                [ca * cb - gamma for ca, cb in corners],
            ]
            if not _cell_has_boundary(boundary_fns):
                bad += 1
    complete = seen >= {"I", "II", "III", "IV", "NH"}
    return [
        CheckResult(
            "return-map atlas",
            bad == 0 and complete,
            float(bad),
            0.0,
            f"{resolution}x{resolution} cells; observed cells {sorted(seen)}",
        )
    ]


def check_sliding_atlas(resolution=200):
    """Sliding sweeps reproduce the RE/RH/RP cell structures."""
    cases = (
        (1.0, -1.0, {"RE1", "RE2"}),
        (-1.0, 1.0, {"RH1", "RH2"}),
        (-1.0, -1.0, {"RP1", "RP2", "RP3", "RP4"}),
    )
    bad = 0
    detail = []
    for gamma, delta, expect_cells in cases:
        alphas = np.linspace(-3.0, 3.0, resolution)
        betas = np.linspace(-3.0, 3.0, resolution)
        da = alphas[1] - alphas[0]
        db = betas[1] - betas[0]
        seen = set()
        for a in alphas:
            for b in betas:
                tag = sliding_region_class(make_parameters(a, b, gamma, delta))
                got = tag.value
                seen.add(got)
                want = _analytic_sliding_tag(a, b, gamma, delta)
                if got == want:
                    continue
                corners = [
                    (a - da / 2, b - db / 2),
                    (a + da / 2, b - db / 2),
                    (a - da / 2, b + db / 2),
                    (a + da / 2, b + db / 2),
                ]
                root = 2.0 * math.sqrt(-gamma) if gamma < 0 else 0.0
                boundary_fns = [
                    [ca for ca, cb in corners],
                    [cb for ca, cb in corners],
                    [ca * cb - gamma for ca, cb in corners],
                    [ca + cb for ca, cb in corners],
                    [(cb - ca) + root for ca, cb in corners],
                ]
                if not _cell_has_boundary(boundary_fns):
                    bad += 1
        if not expect_cells <= seen:
            bad += 1
            detail.append(f"missing cells for gamma={gamma}: {expect_cells - seen}")
    return [
        CheckResult(
            "sliding atlas",
            bad == 0,
            float(bad),
            0.0,
            "; ".join(detail) if detail else "RE/RH/RP structures reproduced",
        )
    ]


# ---------------------------------------------------------------------------
# Suite registry


SUITES = {
    "involutions": lambda scale=1.0, seed=0: (
        check_involution_ground_truth(
            n_alpha=max(4, int(20 * scale)), n_points=max(5, int(40 * scale)), seed=seed
        )
        + check_return_map_grid(
            n_alpha=max(4, int(12 * scale)),
            n_beta=max(4, int(12 * scale)),
            gammas=(0.5, 2.0),
        )
    ),
    "regions": lambda scale=1.0, seed=0: (
        check_saddle_dichotomy(n=max(100, int(20000 * scale)), seed=seed)
        + check_eigenvector_locations(n_per_cell=max(50, int(2000 * scale)), seed=seed)
        + check_region_spectra(n_per_region=max(50, int(2000 * scale)), seed=seed)
        + check_rescaling_invariance(n=max(50, int(2000 * scale)), seed=seed)
        + check_demelo_palis(n=max(50, int(2000 * scale)), seed=seed)
        + check_return_map_atlas(resolution=max(20, int(60 * scale)))
        + check_sliding_atlas(resolution=max(20, int(60 * scale)))
        + check_parabolic_coefficients(n=max(5, int(15 * scale)), seed=seed)
    ),
    "diabolo": lambda scale=1.0, seed=0: check_diabolo(
        n_draws=max(5, int(40 * scale)),
        n_systems=max(2, int(4 * scale)),
        seeds_per_system=max(5, int(25 * scale)),
        seed=seed,
    ),
    "sliding": lambda scale=1.0, seed=0: check_sliding_tangency(
        n_sims=max(5, int(30 * scale)), seed=seed
    ),
}


def run_suites(names, scale=1.0, seed=0):
    results = []
    for name in names:
        results.extend(SUITES[name](scale=scale, seed=seed))
    return results
