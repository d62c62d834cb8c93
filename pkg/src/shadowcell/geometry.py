"""Base-station layouts on a rectangular torus and the toroidal metric.

The world is a rectangle with opposite edges identified.  Its aspect ratio
is fixed at width/height = 2/sqrt(3) so that a triangular lattice with
spacing ``delta`` closes up exactly on the torus when the grid order is even.
"""

import math
from dataclasses import dataclass, field

import numpy as np

SQRT3 = math.sqrt(3.0)

HEXAGONAL = "hexagonal"
POISSON = "poisson"


@dataclass(frozen=True)
class TorusSpec:
    """Finite simulation world: an n x n cell torus with BS spacing delta.

    Parameters
    ----------
    grid_order : int
        Number of lattice rows/columns, must be even and positive so the
        triangular lattice is commensurate with the rectangle.
    delta_km : float
        Spacing between adjacent base stations in km.
    """

    grid_order: int
    delta_km: float

    def __post_init__(self):
        if not isinstance(self.grid_order, (int, np.integer)):
            raise ValueError(f"grid_order must be an integer, got {self.grid_order!r}")
        if self.grid_order <= 0 or self.grid_order % 2 != 0:
            raise ValueError(f"grid_order must be a positive even integer, got {self.grid_order}")
        if not self.delta_km > 0:
            raise ValueError(f"delta_km must be positive, got {self.delta_km}")

    @property
    def width_km(self):
        return self.grid_order * self.delta_km

    @property
    def height_km(self):
        # width/height = 2/sqrt(3) exactly
        return self.grid_order * self.delta_km * SQRT3 / 2.0

    @property
    def area_km2(self):
        return self.width_km * self.height_km


@dataclass(frozen=True)
class Point2D:
    x_km: float
    y_km: float


@dataclass(frozen=True)
class BaseStationLayout:
    """Ordered set of BS positions on a torus.

    ``positions`` is an (n_bs, 2) float array of canonical representatives,
    i.e. -width/2 <= x < width/2 and -height/2 <= y < height/2.
    """

    torus: TorusSpec
    positions: np.ndarray = field(repr=False)
    kind: str

    def __post_init__(self):
        if self.kind not in (HEXAGONAL, POISSON):
            raise ValueError(f"unknown layout kind {self.kind!r}")
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must have shape (n_bs, 2)")
        object.__setattr__(self, "positions", pos)

    @property
    def n_bs(self):
        return self.positions.shape[0]


def wrap_coords(xy, torus):
    """Reduce coordinates to canonical torus representatives.

    Uses floor-based modulo so the result lands in the half-open rectangle
    [-width/2, width/2) x [-height/2, height/2).
    """
    xy = np.asarray(xy, dtype=float)
    out = np.empty_like(xy)
    for axis, span in ((0, torus.width_km), (1, torus.height_km)):
        half = 0.5 * span
        c = (xy[..., axis] + half) % span - half
        # float rounding can land exactly on +half; fold it back
        out[..., axis] = np.where(c >= half, c - span, c)
    return out


def hex_layout(torus):
    """Triangular-lattice layout with grid_order**2 base stations.

    Vertices are delta*(u1 + u2/2, u2*sqrt(3)/2) for u1, u2 in
    0..grid_order-1, reduced to canonical torus coordinates.  No random
    shift is applied: user locations are randomized instead, which gives
    the same spatial statistics with one fewer random stream.
    """
    n = torus.grid_order
    u1, u2 = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    x = torus.delta_km * (u1 + 0.5 * u2)
    y = torus.delta_km * (SQRT3 / 2.0) * u2
    pos = np.column_stack([x.ravel(), y.ravel()])
    return BaseStationLayout(torus, wrap_coords(pos, torus), HEXAGONAL)


def poisson_layout(torus, intensity_per_km2, rng_seed):
    """Homogeneous Poisson layout: Poisson count, i.i.d. uniform positions.

    Parameters
    ----------
    intensity_per_km2 : float
        Expected BS density (BS per km^2), must be positive.
    rng_seed : int, SeedSequence or Generator
        Source of randomness; a fixed seed gives a fixed layout.

    Draw order is count, then all x coordinates, then all y coordinates.
    A zero count is representable; downstream QoS operations reject it.
    """
    if not intensity_per_km2 > 0:
        raise ValueError(f"intensity must be positive, got {intensity_per_km2}")
    gen = np.random.default_rng(rng_seed)
    count = int(gen.poisson(intensity_per_km2 * torus.area_km2))
    hw = 0.5 * torus.width_km
    hh = 0.5 * torus.height_km
    x = gen.uniform(-hw, hw, count)
    y = gen.uniform(-hh, hh, count)
    return BaseStationLayout(torus, np.column_stack([x, y]), POISSON)


def _as_xy(point):
    if hasattr(point, "x_km"):
        return (point.x_km, point.y_km)
    x, y = point
    return (float(x), float(y))


def toroidal_distance(a, b, torus):
    """Shortest distance between two points on the torus, in km.

    Points may be Point2D instances or plain (x, y) pairs.  Equals the
    minimum over the nine translated copies of ``b``; computed by reducing
    each coordinate difference to its minimal image.
    """
    d = toroidal_distance_array(np.array([_as_xy(a)]), np.array([_as_xy(b)]), torus)
    return float(d[0])


def toroidal_distance_array(a, b, torus):
    """Vectorized toroidal distance between row-aligned point arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dx = a[..., 0] - b[..., 0]
    dy = a[..., 1] - b[..., 1]
    dx -= torus.width_km * np.rint(dx / torus.width_km)
    dy -= torus.height_km * np.rint(dy / torus.height_km)
    return np.hypot(dx, dy)


def hex_intensity(delta_km):
    """BS density (per km^2) of the triangular lattice with spacing delta."""
    if not delta_km > 0:
        raise ValueError(f"delta_km must be positive, got {delta_km}")
    return 2.0 / (SQRT3 * delta_km**2)


def layout_to_csv(layout, path):
    """Write a layout as CSV: comment lines with torus/kind, then bs_id,x_km,y_km."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"# torus grid_order={layout.torus.grid_order} "
            f"delta_km={layout.torus.delta_km!r}\n"
        )
        fh.write(f"# kind={layout.kind}\n")
        fh.write("bs_id,x_km,y_km\n")
        for i, (x, y) in enumerate(layout.positions):
            fh.write(f"{i},{float(x)!r},{float(y)!r}\n")


def layout_from_csv(path):
    """Read a layout written by layout_to_csv."""
    grid_order = None
    delta_km = None
    kind = POISSON
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line.lstrip("#").split():
                    if tok.startswith("grid_order="):
                        grid_order = int(tok.split("=", 1)[1])
                    elif tok.startswith("delta_km="):
                        delta_km = float(tok.split("=", 1)[1])
                    elif tok.startswith("kind="):
                        kind = tok.split("=", 1)[1]
                continue
            if line.startswith("bs_id"):
                continue
            _, x, y = line.split(",")
            rows.append((float(x), float(y)))
    if grid_order is None or delta_km is None:
        raise ValueError(f"{path}: missing '# torus grid_order=... delta_km=...' header")
    torus = TorusSpec(grid_order, delta_km)
    pos = np.array(rows, dtype=float).reshape(len(rows), 2)
    return BaseStationLayout(torus, pos, kind)
