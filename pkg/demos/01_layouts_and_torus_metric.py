"""
Base-station layouts on a torus
===============================

Builds the two supported layouts (hexagonal lattice and homogeneous
Poisson) on the same rectangle with wrapped edges, and shows why the
wraparound metric matters.
"""

import numpy as np

from shadowcell.geometry import (
    TorusSpec,
    hex_intensity,
    hex_layout,
    layout_from_csv,
    layout_to_csv,
    poisson_layout,
    toroidal_distance,
)

# A torus of grid order 6 with 1 km spacing holds exactly 6 x 6 hexagonal
# cells.  Width and height follow from the lattice geometry.
torus = TorusSpec(grid_order=6, delta_km=1.0)
print(f"torus: {torus.width_km:.3f} x {torus.height_km:.3f} km, area {torus.area_km2:.3f} km2")

# The lattice has one station per cell.
hexes = hex_layout(torus)
print(f"hexagonal layout: {hexes.n_bs} stations")
print(f"lattice density: {hex_intensity(torus.delta_km):.6f} stations/km2")

# The Poisson layout matches that density on average but is irregular;
# the station count itself is random.
rng_seed = 20260815
pois = poisson_layout(torus, hex_intensity(torus.delta_km), rng_seed)
print(f"poisson layout: {pois.n_bs} stations this draw (mean {torus.area_km2 * hex_intensity(1.0):.1f})")

# Wraparound kills boundary effects: two points near opposite edges are
# neighbours on the torus even though they look far apart in flat coordinates.
a = (-torus.width_km / 2 + 0.1, 0.0)
b = (torus.width_km / 2 - 0.1, 0.0)
flat = np.hypot(a[0] - b[0], a[1] - b[1])
wrapped = toroidal_distance(a, b, torus)
print(f"straight-line distance {flat:.3f} km, torus distance {wrapped:.3f} km")

# Every lattice point has six nearest neighbours at exactly delta,
# including the stations that wrap around the edge.
dists = np.sort(
    [toroidal_distance(hexes.positions[0], p, torus) for p in hexes.positions[1:]]
)
print(f"six nearest lattice neighbours at: {np.round(dists[:6], 12)}")

# Layouts round-trip through a small CSV format that records the torus.
layout_to_csv(pois, "poisson_layout.csv")
back = layout_from_csv("poisson_layout.csv")
print(f"csv round trip ok: {np.array_equal(back.positions, pois.positions)}")
