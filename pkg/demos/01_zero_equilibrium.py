"""The zero state is an exact equilibrium of the characteristic-plane system.

With v0 = v1 = 0 the boundary curve is the straight line Y = -X, every
source term vanishes, and the marching integrator reproduces the constant
state to round-off.  The recovered physical coordinates are then exactly
t = (X+Y)/2, x = (X-Y)/2, which makes this the cheapest possible end-to-end
sanity check of the whole pipeline.
"""

import numpy as np

import charwave as cw

ws = cw.WaveSpeed.constant(1.0)
v0, v1 = cw.make_family("zero", ws)
data = cw.sample_initial(v0, v1, (-1, 1), 0.01, ws)
curve = cw.build_boundary_curve(data, ws)
print(f"ground energy: {data.e0}")
print(f"curve is the antidiagonal: max|Y+X| = {np.max(np.abs(curve.Y + curve.X)):.2e}")

grid = cw.solve_march(curve, (-2, 2, -2, 2), 0.01, 0.01, ws)
grid = cw.attach_coords(grid, curve)
m = grid.mask
print(f"lattice {grid.nx} x {grid.ny}, {int(np.sum(m))} nodes above the curve")

for name, arr, target in (("w", grid.w, 0.0), ("z", grid.z, 0.0),
                          ("p", grid.p, 1.0), ("q", grid.q, 1.0),
                          ("v", grid.v, 0.0)):
    print(f"  max |{name} - {target}| = {np.nanmax(np.abs(arr[m] - target)):.2e}")

XX = np.repeat(grid.Xs[:, None], grid.ny, axis=1)
YY = np.repeat(grid.Ys[None, :], grid.nx, axis=0)
print(f"  max |t - (X+Y)/2| = {np.nanmax(np.abs(grid.t - (XX + YY) / 2)[m]):.2e}")
print(f"  max |x - (X-Y)/2| = {np.nanmax(np.abs(grid.x - (XX - YY) / 2)[m]):.2e}")

for tau in (0.25, 0.5, 1.0):
    s = cw.extract_time_slice(grid, tau)
    print(f"  slice t={tau}: {len(s)} samples, energy = "
          f"{cw.energy_physical(s, ws):.2e}")
