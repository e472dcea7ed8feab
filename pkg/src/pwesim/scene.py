"""Corridor world model: metasurface-coated ceiling, mirror floor, antennas.

The corridor is a 2D vertical slice. The floor lies at y = 0, the ceiling
panel at y = ceiling_height, and the open ends at corridor_x_min/max let
rays escape. The mobile transmitter sits at user height on the floor axis
and fires a fan of rays upward; a wall-mounted receive antenna with a small
circular aperture collects whatever the ceiling redirects back down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Circle, Ray, Vec2, _require_unit, angle_between

DEG = math.pi / 180.0

# Default corridor per the reference setup: 3 m ceiling, 5 m long section
# with the user origin 1 m from the left end, user antenna at 1 m height.
DEFAULT_CEILING_HEIGHT = 3.0
DEFAULT_CORRIDOR_LENGTH = 5.0
DEFAULT_USER_OFFSET = 1.0
DEFAULT_USER_HEIGHT = 1.0
# Receiver: 3.6 m down-corridor, 1.4 m above user height (2.4 m absolute),
# tilted 77 degrees counter-clockwise from straight up so it faces the
# ceiling patch that the steering schemes illuminate.
DEFAULT_RX_X = 3.6
DEFAULT_RX_Y_REL = 1.4
DEFAULT_RX_TILT = 77.0 * DEG
# Beam angles are full cone widths: 30 degree transmit, 60 degree receive.
DEFAULT_TX_HALFWIDTH = 15.0 * DEG
DEFAULT_RX_HALFWIDTH = 30.0 * DEG
# Ceiling control resolution and the user position grid step.
DEFAULT_SUBUNIT_LENGTH = 0.001
DEFAULT_TX_STEP = 0.002
# Capture radius of the receive aperture. Not a corridor dimension; it sets
# the effective spot size the tracer counts as "received". 0.08 keeps the
# uncontrolled mirror-ceiling baseline above a 10% capture fraction, the
# floor the steered schemes are judged against; smaller radii starve it.
DEFAULT_APERTURE_RADIUS = 0.08


def _ceil_count(span: float, step: float) -> int:
    """ceil(span / step) with a relative guard against float drift.

    5.0 / 0.001 lands on 4999.999999999999; a bare ceil of a value one ulp
    above an integer would add a phantom cell instead.
    """
    q = span / step
    return int(math.ceil(q - 1e-9 * max(q, 1.0)))


@dataclass(frozen=True)
class Antenna:
    """Ideal sectored antenna: unit gain inside the cone, nothing outside."""

    position: Vec2
    boresight: Vec2  # unit-norm
    beam_halfwidth: float  # radians, half the full cone width
    gain: float = 1.0

    def __post_init__(self) -> None:
        _require_unit(self.boresight, "boresight")
        if not 0.0 <= self.beam_halfwidth <= math.pi:
            raise ValueError(
                f"beam_halfwidth must be in [0, pi], got {self.beam_halfwidth!r}")
        if self.gain < 0.0:
            raise ValueError(f"gain must be >= 0, got {self.gain!r}")


class HsfPanel:
    """Ceiling panel split into fixed-length subunits with virtual normals.

    Each subunit reflects specularly about its own configured normal, which
    is how the metasurface emulates anomalous reflection. Normals must point
    into the corridor (negative y).
    """

    __slots__ = ("y_height", "x_start", "x_end", "subunit_length", "_xy")

    def __init__(self, y_height: float, x_start: float, x_end: float,
                 subunit_length: float, normals) -> None:
        if subunit_length <= 0.0:
            raise ValueError(f"subunit_length must be > 0, got {subunit_length!r}")
        if x_end <= x_start:
            raise ValueError("x_end must exceed x_start")
        xy = np.asarray(
            [[n.x, n.y] for n in normals] if not isinstance(normals, np.ndarray)
            else normals, dtype=float)
        if xy.ndim != 2 or xy.shape[1] != 2:
            raise ValueError("normals must be a sequence of 2D vectors")
        expected = _ceil_count(x_end - x_start, subunit_length)
        if len(xy) != expected:
            raise ValueError(
                f"panel spans {x_end - x_start!r} m at {subunit_length!r} m per "
                f"subunit and needs {expected} normals, got {len(xy)}")
        norms = np.hypot(xy[:, 0], xy[:, 1])
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ValueError("every panel normal must be unit-norm")
        if np.any(xy[:, 1] >= 0.0):
            raise ValueError("every panel normal must point downward (y < 0)")
        self.y_height = float(y_height)
        self.x_start = float(x_start)
        self.x_end = float(x_end)
        self.subunit_length = float(subunit_length)
        xy = xy.copy()
        xy.flags.writeable = False
        self._xy = xy

    @property
    def subunit_count(self) -> int:
        return len(self._xy)

    @property
    def normals(self) -> tuple[Vec2, ...]:
        return tuple(Vec2(float(x), float(y)) for x, y in self._xy)

    def normals_array(self) -> np.ndarray:
        """Read-only (N, 2) float view of the normals, for the batch tracer."""
        return self._xy

    def normal_at(self, i: int) -> Vec2:
        x, y = self._xy[i]
        return Vec2(float(x), float(y))

    def index_at(self, x: float) -> int:
        """Subunit index owning ceiling coordinate x, clipped to the panel."""
        i = int((x - self.x_start) / self.subunit_length)
        return min(max(i, 0), self.subunit_count - 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HsfPanel):
            return NotImplemented
        return (self.y_height == other.y_height
                and self.x_start == other.x_start
                and self.x_end == other.x_end
                and self.subunit_length == other.subunit_length
                and np.array_equal(self._xy, other._xy))

    def __repr__(self) -> str:
        return (f"HsfPanel(y={self.y_height}, x=[{self.x_start}, {self.x_end}], "
                f"subunits={self.subunit_count} x {self.subunit_length} m)")


def subunit_center(panel: HsfPanel, i: int) -> Vec2:
    """Midpoint of subunit i on the panel surface."""
    if not 0 <= i < panel.subunit_count:
        raise IndexError(
            f"subunit index {i} outside [0, {panel.subunit_count - 1}]")
    return Vec2(panel.x_start + (i + 0.5) * panel.subunit_length, panel.y_height)


def mirror_panel(y_height: float, x_start: float, x_end: float,
                 subunit_length: float) -> HsfPanel:
    """Panel with every normal straight down: a plain specular ceiling."""
    count = _ceil_count(x_end - x_start, subunit_length)
    xy = np.tile([0.0, -1.0], (count, 1))
    return HsfPanel(y_height, x_start, x_end, subunit_length, xy)


@dataclass(frozen=True)
class Scene:
    """Complete corridor: surfaces, both antennas, and the capture aperture."""

    ceiling: HsfPanel
    floor_y: float
    corridor_x_min: float
    corridor_x_max: float
    tx: Antenna
    rx: Antenna
    rx_aperture: Circle
    user_height: float
    ceiling_height: float

    def __post_init__(self) -> None:
        if not 0.0 < self.user_height < self.ceiling_height:
            raise ValueError(
                f"user_height must sit strictly between floor and ceiling, "
                f"got {self.user_height!r} vs {self.ceiling_height!r}")
        if self.corridor_x_max <= self.corridor_x_min:
            raise ValueError("corridor_x_max must exceed corridor_x_min")
        c = self.rx_aperture.center
        if not (self.corridor_x_min < c.x < self.corridor_x_max
                and self.floor_y < c.y < self.ceiling_height):
            raise ValueError("rx_aperture center must lie strictly inside the corridor")
        if self.tx.position.y != self.user_height:
            raise ValueError("tx antenna must sit at user_height")
        if self.ceiling.y_height != self.ceiling_height:
            raise ValueError("ceiling panel height must match ceiling_height")


def build_default_scene(aperture_radius: float = DEFAULT_APERTURE_RADIUS) -> Scene:
    """Reference corridor with a plain mirror ceiling.

    Steering code swaps in configured panels; the default panel is the
    uncontrolled all-mirror state.
    """
    x_min = -DEFAULT_USER_OFFSET
    x_max = DEFAULT_CORRIDOR_LENGTH - DEFAULT_USER_OFFSET
    panel = mirror_panel(DEFAULT_CEILING_HEIGHT, x_min, x_max,
                         DEFAULT_SUBUNIT_LENGTH)
    rx_pos = Vec2(DEFAULT_RX_X, DEFAULT_USER_HEIGHT + DEFAULT_RX_Y_REL)
    # +y rotated counter-clockwise by the tilt angle.
    boresight = Vec2(-math.sin(DEFAULT_RX_TILT), math.cos(DEFAULT_RX_TILT))
    return Scene(
        ceiling=panel,
        floor_y=0.0,
        corridor_x_min=x_min,
        corridor_x_max=x_max,
        tx=Antenna(Vec2(0.0, DEFAULT_USER_HEIGHT), Vec2(0.0, 1.0),
                   DEFAULT_TX_HALFWIDTH),
        rx=Antenna(rx_pos, boresight, DEFAULT_RX_HALFWIDTH),
        rx_aperture=Circle(rx_pos, aperture_radius),
        user_height=DEFAULT_USER_HEIGHT,
        ceiling_height=DEFAULT_CEILING_HEIGHT,
    )


def fan_directions(boresight: Vec2, beam_halfwidth: float,
                   n_rays: int) -> np.ndarray:
    """(n, 2) unit directions uniformly spaced in angle across the beam cone.

    Endpoints included; directions come out in increasing-angle order, so the
    fan is symmetric about the boresight pair by pair.
    """
    if n_rays < 2:
        raise ValueError(f"n_rays must be >= 2, got {n_rays}")
    base = math.atan2(boresight.y, boresight.x)
    ang = base + np.linspace(-beam_halfwidth, beam_halfwidth, n_rays)
    return np.column_stack((np.cos(ang), np.sin(ang)))


def tx_ray_fan(scene: Scene, dislocation: float, n_rays: int,
               total_power: float) -> list[Ray]:
    """Launch fan for the transmitter displaced by `dislocation` meters.

    Every ray carries an equal share of total_power * gain; the share is one
    multiply and one divide, so summing the fan reproduces the total without
    accumulation drift.
    """
    if total_power < 0.0:
        raise ValueError(f"total_power must be >= 0, got {total_power!r}")
    dirs = fan_directions(scene.tx.boresight, scene.tx.beam_halfwidth, n_rays)
    origin = Vec2(scene.tx.position.x + dislocation, scene.tx.position.y)
    per_ray = total_power * scene.tx.gain / n_rays
    return [Ray(origin, Vec2(float(dx), float(dy)), per_ray)
            for dx, dy in dirs]


def rx_accepts(scene: Scene, arrival_direction: Vec2) -> bool:
    """True iff a ray arriving along arrival_direction falls in the Rx cone.

    The antenna sees the reversed direction of travel, so the test is
    angle(-arrival, boresight) <= beam_halfwidth.
    """
    return angle_between(-arrival_direction, scene.rx.boresight) \
        <= scene.rx.beam_halfwidth
