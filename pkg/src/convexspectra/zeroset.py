"""Zeros of the body transform and their alignment with structured grids.

For an origin-symmetric body the transform is real-valued, so zeros are
located by sign-change bisection along scan lines.  Alignment targets:
the punctured integer grid lines ("Z_Q"), the full Cartesian grid ("G"),
and vertical lines at a fractional shift ("shifted_vertical_grid").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (NoBlowupError, NotStandardPositionError, NotSymmetricError,
                     NoZerosFoundError)
from .fourier import EvalOptions, DEFAULT_OPTS, frozen_batch_evaluator
from .geometry import (ConvexBody, ConvexPolygon, GraphBody, Point2, area,
                       height_profile, is_symmetric, _standard_position_check)
from .heights import HeightFn

DEFAULT_SCAN_STEP = 0.02  # below half the square fixture's unit zero spacing


@dataclass(frozen=True)
class Slab:
    """Horizontal frequency band [R, R+10] x [-A, A]."""
    A: float
    R: float

    def __post_init__(self):
        if not (self.A >= 1.0):
            raise ValueError("slab half-height A must be >= 1")
        if not (self.R > 0.0):
            raise ValueError("slab offset R must be positive")


@dataclass(frozen=True)
class ZeroPoint:
    xi: Point2
    bracket: tuple[Point2, Point2]
    residual: float


@dataclass(frozen=True)
class AlignmentReport:
    zeros: list[ZeroPoint]
    max_dist: float
    mean_dist: float
    target: str
    params: tuple
    beta: float | None = None


def _dist_to_integers(t: float) -> float:
    return abs(t - round(t))


def _dist_to_nonzero_integers(t: float) -> float:
    k = round(t)
    return abs(t - k) if k != 0 else 1.0 - abs(t)


def grid_distance(xi, target: str, beta: float = 0.0) -> float:
    """Euclidean distance from xi to a structured line family.

    "Z_Q": vertical lines at nonzero integers union horizontal lines at
    nonzero integers (the axes excluded).  "G": the same with zero allowed.
    "shifted_vertical_grid": vertical lines xi1 in beta + Z.
    """
    x, y = float(xi[0]), float(xi[1])
    if target == "Z_Q":
        return min(_dist_to_nonzero_integers(x), _dist_to_nonzero_integers(y))
    if target == "G":
        return min(_dist_to_integers(x), _dist_to_integers(y))
    if target == "shifted_vertical_grid":
        t = (x - beta) % 1.0
        return min(t, 1.0 - t)
    raise ValueError(f"unknown grid target {target!r}")


def _require_origin_symmetric(body: ConvexBody) -> None:
    ok, center = is_symmetric(body)
    scale = float(np.max(np.abs(body.vertices))) if isinstance(body, ConvexPolygon) \
        else max(abs(body.a), abs(body.b), body.f.max_value(), body.g.max_value())
    if not ok or math.hypot(center[0], center[1]) > 1e-9 * max(scale, 1.0):
        raise NotSymmetricError(
            "zero bracketing uses the real part, which needs symmetry about the origin")


def _bisect_zeros(ev, p_lo: np.ndarray, p_hi: np.ndarray, v_lo: np.ndarray,
                  tol: float) -> list[ZeroPoint]:
    """Vectorized bisection on brackets with opposite signs of Re(transform)."""
    lo = p_lo.copy()
    hi = p_hi.copy()
    s_lo = np.where(v_lo > 0, 1.0, -1.0)
    width = float(np.max(np.linalg.norm(hi - lo, axis=1), initial=0.0))
    n_iter = max(1, int(math.ceil(math.log2(max(width, 1e-10) / 1e-10))) + 2)
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        vm = ev(mid).real
        s_m = np.where(vm > 0, 1.0, -1.0)
        take_lo = s_m == s_lo          # root in the upper half
        lo = np.where(take_lo[:, None], mid, lo)
        hi = np.where(take_lo[:, None], hi, mid)
    mid = 0.5 * (lo + hi)
    res = np.abs(ev(mid))
    out = []
    for i in range(len(mid)):
        if res[i] <= tol:
            out.append(ZeroPoint(Point2(*mid[i]), (Point2(*lo[i]), Point2(*hi[i])),
                                 float(res[i])))
    return out


def _scan_lines(ev, starts: np.ndarray, stops: np.ndarray, n_samples: int,
                tol: float) -> list[ZeroPoint]:
    """Sample each segment uniformly, bracket sign changes, bisect them all."""
    ts = np.linspace(0.0, 1.0, n_samples + 1)
    pts = starts[:, None, :] + ts[None, :, None] * (stops - starts)[:, None, :]
    flat = pts.reshape(-1, 2)
    vals = ev(flat).real.reshape(len(starts), -1)
    # nudge exact-zero samples off the node so the sign logic stays two-sided
    exact = np.argwhere(vals == 0.0)
    if len(exact):
        h = ts[1] - ts[0]
        for r, c in exact:
            tshift = min(ts[c] + 0.37 * h * 1e-3, 1.0)
            q = starts[r] + tshift * (stops[r] - starts[r])
            pts[r, c] = q
        vals = ev(pts.reshape(-1, 2)).real.reshape(len(starts), -1)
    sign_change = vals[:, :-1] * vals[:, 1:] < 0.0
    rr, cc = np.nonzero(sign_change)
    if len(rr) == 0:
        return []
    p_lo = pts[rr, cc]
    p_hi = pts[rr, cc + 1]
    return _bisect_zeros(ev, p_lo, p_hi, vals[rr, cc], tol)


def zeros_on_segment(body: ConvexBody, p0, p1, step: float = DEFAULT_SCAN_STEP,
                     tol: float | None = None,
                     opts: EvalOptions = DEFAULT_OPTS) -> list[ZeroPoint]:
    """Zeros of the transform along the segment p0 -> p1, in segment order."""
    _require_origin_symmetric(body)
    if tol is None:
        tol = 1e-9 * area(body)
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    seg_len = float(np.linalg.norm(p1 - p0))
    n = max(1, int(math.ceil(seg_len / step)))
    box = np.max(np.abs(np.stack([p0, p1])), axis=0)
    ev = frozen_batch_evaluator(body, box[0] + 1.0, box[1] + 1.0, 0.01 * tol)
    zeros = _scan_lines(ev, p0[None, :], p1[None, :], n, tol)
    zeros.sort(key=lambda z: float(np.dot(np.asarray(z.xi) - p0, p1 - p0)))
    return zeros


def _slab_standard_position(body: ConvexBody) -> None:
    if isinstance(body, ConvexPolygon):
        _standard_position_check(body, 1e-9)
        return
    tol = 1e-9
    if abs(body.a + 0.5) > tol or abs(body.b - 0.5) > tol:
        raise NotStandardPositionError("graph body domain must be [-1/2, 1/2]")
    xs = np.linspace(body.a, body.b, 1001)
    if float(np.min(body.f(xs))) < 0.5 - tol or float(np.min(body.g(xs))) < 0.5 - tol:
        raise NotStandardPositionError("graph body does not contain the unit square")


def slab_zero_alignment(body: ConvexBody, A: float, R_list, step: float = DEFAULT_SCAN_STEP,
                        opts: EvalOptions = DEFAULT_OPTS) -> list[AlignmentReport]:
    """Scan horizontal lines across each slab [R, R+10] x [-A, A]; report the
    located zeros and their distance statistics to the punctured grid Z_Q."""
    _require_origin_symmetric(body)
    _slab_standard_position(body)
    tol = 1e-9 * area(body)
    reports = []
    # line ordinates offset half a step: never scan exactly on an integer line,
    # where the transform can vanish identically and bracketing degenerates
    n_lines = int(math.floor(2.0 * A / step))
    xi2s = -A + (np.arange(n_lines) + 0.5) * step
    for R in R_list:
        Slab(A, float(R))
        ev = frozen_batch_evaluator(body, R + 10.0 + 1.0, A + 1.0, 0.01 * tol)
        starts = np.stack([np.full(n_lines, float(R)), xi2s], axis=1)
        stops = np.stack([np.full(n_lines, float(R) + 10.0), xi2s], axis=1)
        zeros = _scan_lines(ev, starts, stops, int(math.ceil(10.0 / step)), tol)
        dists = [grid_distance(z.xi, "Z_Q") for z in zeros]
        reports.append(AlignmentReport(
            zeros=zeros,
            max_dist=float(max(dists, default=0.0)),
            mean_dist=float(np.mean(dists)) if dists else 0.0,
            target="Z_Q",
            params=(A, (float(R), float(R) + 10.0), math.nan),
        ))
    return reports


# ---------------------------------------------------------------------------
# cap slope and scale selection


def cap_slope(f: HeightFn, delta) -> float:
    """S(delta) = (f(1/2 - delta) + f(-1/2 + delta)) / delta."""
    delta = np.asarray(delta, dtype=float)
    s = (f(0.5 - delta) + f(-0.5 + delta)) / delta
    return float(s) if s.ndim == 0 else s


def select_scales(f: HeightFn, eps: float, A: float) -> tuple[float, float]:
    """Pick the two scan scales (delta0, delta) from the cap slope S.

    Requires S to blow up as delta -> 0 (unique-normal endpoint).  delta0 is
    the largest delta <= eps/(10 A) with delta*S(delta) <= eps/(10 A); delta
    is the largest delta <= delta0/10 with S(delta) >= 10 (1 + S(delta0)/eps).
    Callers handle the flat/interval endpoint case before calling: here a
    bounded S raises NoBlowup.
    """
    if not (0.0 < eps and A > 0.0):
        raise ValueError("eps and A must be positive")
    s_hi = cap_slope(f, 0.1)
    s_lo = cap_slope(f, 1e-7)
    if not np.isfinite(s_lo) or s_lo < 5.0 * max(s_hi, 1e-12):
        raise NoBlowupError(
            f"cap slope stays bounded (S(1e-7) = {s_lo:.6g}, S(0.1) = {s_hi:.6g})")

    target = eps / (10.0 * A)
    grid = np.logspace(math.log10(target), -13.0, 800)
    ds = grid * cap_slope(f, grid)
    ok = ds <= target
    if not np.any(ok):
        raise NoBlowupError("delta * S(delta) does not drop below eps/(10 A) in range")
    delta0 = float(grid[np.argmax(ok)])  # first True = largest qualifying delta

    threshold = 10.0 * (1.0 + cap_slope(f, delta0) / eps)
    grid2 = np.logspace(math.log10(delta0 / 10.0), -14.0, 800)
    ok2 = cap_slope(f, grid2) >= threshold
    if not np.any(ok2):
        raise NoBlowupError("cap slope grows too slowly to pass the second gate")
    delta = float(grid2[np.argmax(ok2)])
    return delta0, delta


# ---------------------------------------------------------------------------
# ball alignment near the horizontal axis


def _circular_minimax(fracs: np.ndarray) -> tuple[float, float, float]:
    """Best shift beta in [0,1) minimizing the max circular distance of the
    given fractional parts to beta; returns (beta, max_dist, mean_dist)."""
    u = np.sort(fracs % 1.0)
    gaps = np.diff(np.concatenate([u, u[:1] + 1.0]))
    k = int(np.argmax(gaps))
    arc = 1.0 - float(gaps[k])            # length of the arc covering all points
    beta = (u[(k + 1) % len(u)] + 0.5 * arc) % 1.0
    d = np.abs((fracs - beta + 0.5) % 1.0 - 0.5)
    return float(beta), float(np.max(d)), float(np.mean(d))


def ball_zero_alignment(body: ConvexBody, A: float, eps: float,
                        R_window: tuple[float, float], step: float = DEFAULT_SCAN_STEP,
                        opts: EvalOptions = DEFAULT_OPTS) -> AlignmentReport:
    """Zeros inside balls B(R e1, A) for R across R_window, reported against
    the best-fitting family of shifted vertical lines beta + Z.

    A body whose right boundary is a vertical wall segment (interval case)
    is scanned directly.  Otherwise the cap-slope gate must pass: a bounded
    slope means the extreme point sits on a corner or flat arc and the
    shifted-grid structure is not expected (NoBlowup).
    """
    _require_origin_symmetric(body)
    if isinstance(body, ConvexPolygon):
        half_width = float(np.max(body.vertices[:, 0]))
    else:
        half_width = body.b
    if abs(half_width - 0.5) > 1e-6:
        raise NotStandardPositionError("body must span exactly the slab |x| <= 1/2")

    u = height_profile(body)
    wall = float(u(0.5)) > 1e-9
    if not wall:
        select_scales(u, eps, A)  # raises NoBlowup for corner/flat endpoints

    tol = 1e-9 * area(body)
    r_lo, r_hi = float(R_window[0]), float(R_window[1])
    R_grid = np.linspace(r_lo, r_hi, 9)
    ev = frozen_batch_evaluator(body, r_hi + A + 1.0, A + 1.0, 0.01 * tol)

    n_lines = max(4, int(math.ceil(12.0 * min(1.0, 2.0 * A))))
    dy = 2.0 * A / n_lines
    xi2s = -A + (np.arange(n_lines) + 0.5) * dy

    best = None
    for R in R_grid:
        chords = np.sqrt(np.maximum(A * A - xi2s * xi2s, 0.0))
        keep = chords > step
        starts = np.stack([R - chords[keep], xi2s[keep]], axis=1)
        stops = np.stack([R + chords[keep], xi2s[keep]], axis=1)
        n = max(2, int(math.ceil(2.0 * A / step)))
        zeros = _scan_lines(ev, starts, stops, n, tol)
        if not zeros:
            continue
        fracs = np.array([z.xi[0] for z in zeros])
        beta, max_d, mean_d = _circular_minimax(fracs)
        report = AlignmentReport(zeros, max_d, mean_d, "shifted_vertical_grid",
                                 (A, (r_lo, r_hi), eps), beta)
        if best is None or report.max_dist < best.max_dist:
            best = report
    if best is None:
        raise NoZerosFoundError("no transform zeros found in any scanned ball; "
                                "enlarge R_window or A")
    return best
