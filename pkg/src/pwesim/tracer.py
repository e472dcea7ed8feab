"""Power transport through the corridor by specular ray tracing.

Rays launch from the transmitter fan and bounce between the configured
ceiling panel and the mirror floor until they are captured by the receive
aperture, escape through an open corridor end, or exhaust the bounce
budget. Capture is tested on every straight segment before the next
surface hit, so a ray cannot fly through the aperture unnoticed.

The same single-bounce transport integral is also available as a midpoint
quadrature over the ceiling footprint; tracer and quadrature are two
independent discretizations of one integral and serve as mutual oracles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import FORWARD_EPS, Ray, Vec2
from .scene import HsfPanel, Scene, fan_directions


class Spreading(enum.Enum):
    """How captured power relates to the distance travelled.

    GEOMETRIC counts a captured ray at full strength, so results are pure
    capture fractions. INVERSE_SQUARE scales by (1 m / path length)^2 for
    free-space-style sensitivity studies.
    """

    GEOMETRIC = "geometric"
    INVERSE_SQUARE = "inverse_square"


@dataclass(frozen=True)
class TracerConfig:
    n_rays: int = 100001
    max_bounces: int = 16
    spreading: Spreading = Spreading.GEOMETRIC
    record_paths: bool = False
    # Gate capture on the receive antenna cone as well as the aperture disc.
    # Off by default: an all-mirror corridor delivers rays almost vertically,
    # far outside the 60 degree receiver cone, and gating would zero the
    # uncontrolled baseline that steering is judged against.
    rx_cone_gate: bool = False

    def __post_init__(self) -> None:
        if self.n_rays < 2:
            raise ValueError(f"n_rays must be >= 2, got {self.n_rays}")
        if self.max_bounces < 1:
            raise ValueError(f"max_bounces must be >= 1, got {self.max_bounces}")


@dataclass(frozen=True)
class Captured:
    """Ray entered the aperture; power is the delivered amount."""

    power: float
    path: tuple[Vec2, ...]


@dataclass(frozen=True)
class Escaped:
    """Ray left through an open corridor end."""

    path: tuple[Vec2, ...]


@dataclass(frozen=True)
class Terminated:
    """Ray absorbed: bounce budget exhausted or unreflectable geometry."""

    path: tuple[Vec2, ...]


RayFate = Captured | Escaped | Terminated


@dataclass(frozen=True)
class TraceOutcome:
    """Power totals over a traced bundle, watts."""

    captured_power: float
    escaped_power: float
    terminated_power: float
    per_ray_records: tuple[RayFate, ...] | None = None

    @property
    def total_power(self) -> float:
        return self.captured_power + self.escaped_power + self.terminated_power


_ALIVE, _CAPTURED, _ESCAPED, _TERMINATED = 0, 1, 2, 3


def _trace_batch(scene: Scene, panel: HsfPanel, ox, oy, dx, dy, power,
                 bounce, cfg: TracerConfig):
    """Trace a bundle of rays; returns bucket sums and optional records.

    All per-step work is vectorized over the still-alive subset. Power sums
    accumulate per step in fixed array order, so the result is deterministic
    for a given input bundle regardless of process or worker count.
    """
    n = len(ox)
    ceil_y = panel.y_height
    floor_y = scene.floor_y
    x_min, x_max = scene.corridor_x_min, scene.corridor_x_max
    normals = panel.normals_array()
    n_sub = panel.subunit_count
    rx = scene.rx_aperture.center
    r2 = scene.rx_aperture.radius ** 2
    inv_sq = cfg.spreading is Spreading.INVERSE_SQUARE
    if cfg.rx_cone_gate:
        cos_min = math.cos(scene.rx.beam_halfwidth)
        bs_x, bs_y = scene.rx.boresight.x, scene.rx.boresight.y

    ox = np.asarray(ox, float).copy()
    oy = np.asarray(oy, float).copy()
    dx = np.asarray(dx, float).copy()
    dy = np.asarray(dy, float).copy()
    power = np.asarray(power, float).copy()
    bounce = np.asarray(bounce, int).copy()
    cum_len = np.zeros(n)
    gi = np.arange(n)  # original ray index of each alive slot

    captured = escaped = terminated = 0.0
    record = cfg.record_paths
    if record:
        status = np.full(n, _ALIVE, dtype=np.int8)
        delivered = np.zeros(n)
        paths: list[list[Vec2]] = [[Vec2(float(x), float(y))]
                                   for x, y in zip(ox, oy)]

    def _log_points(idx, px, py):
        for k, x, y in zip(idx, px, py):
            paths[k].append(Vec2(float(x), float(y)))

    inf = np.inf
    for _ in range(cfg.max_bounces + 2):
        if len(gi) == 0:
            break
        # nearest surface along each ray; invalid directions give inf
        with np.errstate(divide="ignore", invalid="ignore"):
            t_ceil = np.where(dy > 0.0, (ceil_y - oy) / dy, inf)
            t_floor = np.where(dy < 0.0, (floor_y - oy) / dy, inf)
            t_right = np.where(dx > 0.0, (x_max - ox) / dx, inf)
            t_left = np.where(dx < 0.0, (x_min - ox) / dx, inf)
        t_ceil = np.where(t_ceil > FORWARD_EPS, t_ceil, inf)
        t_floor = np.where(t_floor > FORWARD_EPS, t_floor, inf)
        t_right = np.where(t_right > FORWARD_EPS, t_right, inf)
        t_left = np.where(t_left > FORWARD_EPS, t_left, inf)
        t_all = np.stack((t_ceil, t_floor, t_right, t_left))
        surf = np.argmin(t_all, axis=0)
        t_surf = t_all[surf, np.arange(len(gi))]

        # aperture capture on this segment, before the surface
        mx = rx.x - ox
        my = rx.y - oy
        s = mx * dx + my * dy
        h2 = np.maximum(mx * mx + my * my - s * s, 0.0)
        cap = (s > FORWARD_EPS) & (h2 <= r2) & (s < t_surf)
        if cfg.rx_cone_gate:
            cap &= (-dx) * bs_x + (-dy) * bs_y >= cos_min
        if np.any(cap):
            s_entry = s[cap] - np.sqrt(np.maximum(r2 - h2[cap], 0.0))
            if inv_sq:
                gain = 1.0 / (cum_len[cap] + s_entry) ** 2
                step_power = power[cap] * gain
            else:
                step_power = power[cap]
            captured += float(np.sum(step_power))
            if record:
                status[gi[cap]] = _CAPTURED
                delivered[gi[cap]] = step_power
                _log_points(gi[cap], ox[cap] + s_entry * dx[cap],
                            oy[cap] + s_entry * dy[cap])

        live = ~cap
        no_surface = live & ~np.isfinite(t_surf)
        if np.any(no_surface):
            # nowhere to go (should not happen for unit directions);
            # absorb to preserve the power ledger
            terminated += float(np.sum(power[no_surface]))
            if record:
                status[gi[no_surface]] = _TERMINATED
            live &= ~no_surface

        hx = ox + t_surf * dx
        hy = oy + t_surf * dy

        out = live & (surf >= 2)  # open corridor ends
        if np.any(out):
            escaped += float(np.sum(power[out]))
            if record:
                status[gi[out]] = _ESCAPED
                _log_points(gi[out], hx[out], hy[out])
            live &= ~out

        spent = live & (bounce >= cfg.max_bounces)
        if np.any(spent):
            terminated += float(np.sum(power[spent]))
            if record:
                status[gi[spent]] = _TERMINATED
                _log_points(gi[spent], hx[spent], hy[spent])
            live &= ~spent

        new_dx = dx.copy()
        new_dy = dy.copy()
        on_floor = live & (surf == 1)
        new_dy[on_floor] = -dy[on_floor]

        on_ceil = live & (surf == 0)
        if np.any(on_ceil):
            idx = ((hx[on_ceil] - panel.x_start)
                   / panel.subunit_length).astype(int)
            idx = np.clip(idx, 0, n_sub - 1)
            nx = normals[idx, 0]
            ny = normals[idx, 1]
            k = 2.0 * (dx[on_ceil] * nx + dy[on_ceil] * ny)
            rx_dir = dx[on_ceil] - k * nx
            ry_dir = dy[on_ceil] - k * ny
            norm = np.hypot(rx_dir, ry_dir)
            new_dx[on_ceil] = rx_dir / norm
            new_dy[on_ceil] = ry_dir / norm
            # a virtual normal may send the ray back out through the panel;
            # the surface cannot transmit, so treat that as absorbed
            bad = np.zeros(len(gi), dtype=bool)
            bad[on_ceil] = new_dy[on_ceil] >= 0.0
            if np.any(bad):
                terminated += float(np.sum(power[bad]))
                if record:
                    status[gi[bad]] = _TERMINATED
                    _log_points(gi[bad], hx[bad], hy[bad])
                live &= ~bad
                on_ceil &= ~bad

        if record and np.any(live):
            _log_points(gi[live], hx[live], hy[live])

        # compact to the surviving subset and advance
        keep = live
        snap_y = np.where(surf == 0, ceil_y, floor_y)
        ox = hx[keep]
        oy = snap_y[keep]
        dx = new_dx[keep]
        dy = new_dy[keep]
        cum_len = cum_len[keep] + t_surf[keep]
        power = power[keep]
        bounce = bounce[keep] + 1
        gi = gi[keep]

    if len(gi) > 0:
        # bounce budget plus slack exhausted without resolution
        terminated += float(np.sum(power))
        if record:
            status[gi] = _TERMINATED

    records = None
    if record:
        out_records: list[RayFate] = []
        for k in range(n):
            path = tuple(paths[k])
            st = int(status[k])
            if st == _CAPTURED:
                out_records.append(Captured(float(delivered[k]), path))
            elif st == _ESCAPED:
                out_records.append(Escaped(path))
            else:
                out_records.append(Terminated(path))
        records = tuple(out_records)
    return captured, escaped, terminated, records


def trace_ray(scene: Scene, panel: HsfPanel, ray: Ray,
              cfg: TracerConfig) -> RayFate:
    """Fate of a single ray, with its full polyline."""
    one = TracerConfig(n_rays=2, max_bounces=cfg.max_bounces,
                       spreading=cfg.spreading, record_paths=True,
                       rx_cone_gate=cfg.rx_cone_gate)
    _, _, _, records = _trace_batch(
        scene, panel,
        np.array([ray.origin.x]), np.array([ray.origin.y]),
        np.array([ray.direction.x]), np.array([ray.direction.y]),
        np.array([ray.power]), np.array([ray.bounce_count]), one)
    assert records is not None
    return records[0]


def received_power(scene: Scene, panel: HsfPanel, dislocation: float,
                   cfg: TracerConfig, total_power: float = 1.0) -> TraceOutcome:
    """Trace the full transmit fan at the given dislocation.

    Power is allocated to rays by a single multiply and divide, so the
    emitted total is total_power * tx.gain with no accumulation drift.
    """
    dirs = fan_directions(scene.tx.boresight, scene.tx.beam_halfwidth,
                          cfg.n_rays)
    n = cfg.n_rays
    ox = np.full(n, scene.tx.position.x + dislocation)
    oy = np.full(n, scene.tx.position.y)
    power = np.full(n, total_power * scene.tx.gain / n)
    bounce = np.zeros(n, dtype=int)
    captured, escaped, terminated, records = _trace_batch(
        scene, panel, ox, oy, dirs[:, 0], dirs[:, 1], power, bounce, cfg)
    return TraceOutcome(captured, escaped, terminated, records)


def efficiency(outcome: TraceOutcome, emitted_power: float) -> float:
    """Captured share of the emitted power."""
    if emitted_power <= 0.0:
        raise ValueError(f"emitted_power must be > 0, got {emitted_power!r}")
    return outcome.captured_power / emitted_power


def analytic_received_power(scene: Scene, panel: HsfPanel, dislocation: float,
                            quad_points: int, rx_cone_gate: bool = False,
                            total_power: float = 1.0) -> float:
    """Single-bounce received power by midpoint quadrature over the ceiling.

    Integrates capture over the beam footprint [d - x_b, d + x_b] with
    x_b = (H - h) tan(halfwidth), weighting each ceiling point by the angular
    density of the uniform fan. Independent of the ray tracer: same integral,
    different discretization.
    """
    if quad_points < 10:
        raise ValueError(f"quad_points must be >= 10, got {quad_points}")
    tx = scene.tx
    if abs(tx.boresight.x) > 1e-12 or tx.boresight.y <= 0.0:
        raise ValueError("quadrature assumes an upward-pointing transmitter")
    if tx.beam_halfwidth >= math.pi / 2:
        raise ValueError("beam_halfwidth must be < pi/2 for a finite footprint")
    height = panel.y_height - tx.position.y
    x_b = height * math.tan(tx.beam_halfwidth)
    tx_x = tx.position.x + dislocation

    edges = np.linspace(tx_x - x_b, tx_x + x_b, quad_points + 1)
    xs = 0.5 * (edges[:-1] + edges[1:])
    dx_cell = 2.0 * x_b / quad_points

    rel_x = xs - tx_x
    dist2 = rel_x * rel_x + height * height
    density = height / dist2  # d(angle)/dx of the fan
    dist = np.sqrt(dist2)
    ix = rel_x / dist
    iy = height / dist

    idx = np.clip(((xs - panel.x_start) / panel.subunit_length).astype(int),
                  0, panel.subunit_count - 1)
    normals = panel.normals_array()
    nx = normals[idx, 0]
    ny = normals[idx, 1]
    k = 2.0 * (ix * nx + iy * ny)
    rx_dir = ix - k * nx
    ry_dir = iy - k * ny
    norm = np.hypot(rx_dir, ry_dir)
    rx_dir /= norm
    ry_dir /= norm

    # capture test identical to the tracer's segment test
    rx_c = scene.rx_aperture.center
    mx = rx_c.x - xs
    my = rx_c.y - panel.y_height
    s = mx * rx_dir + my * ry_dir
    h2 = np.maximum(mx * mx + my * my - s * s, 0.0)
    r2 = scene.rx_aperture.radius ** 2

    inf = np.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        t_floor = np.where(ry_dir < 0.0, (scene.floor_y - panel.y_height)
                           / ry_dir, inf)
        t_right = np.where(rx_dir > 0.0, (scene.corridor_x_max - xs)
                           / rx_dir, inf)
        t_left = np.where(rx_dir < 0.0, (scene.corridor_x_min - xs)
                          / rx_dir, inf)
    t_surf = np.minimum(np.minimum(t_floor, t_right), t_left)

    cap = (ry_dir < 0.0) & (s > FORWARD_EPS) & (h2 <= r2) & (s < t_surf)
    if rx_cone_gate:
        cos_min = math.cos(scene.rx.beam_halfwidth)
        bs = scene.rx.boresight
        cap &= (-rx_dir) * bs.x + (-ry_dir) * bs.y >= cos_min

    weight = total_power * tx.gain / (2.0 * tx.beam_halfwidth)
    return float(weight * dx_cell * np.sum(density[cap]))
