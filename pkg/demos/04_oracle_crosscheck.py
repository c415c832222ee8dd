"""Cross-validation against an independent finite-difference solver.

A small-amplitude packet makes the equation effectively linear, so two
things can be checked at once:

* the characteristic pipeline and a plain upwind solver agree pointwise
  (completely different discretizations of the same problem);
* the upwind solver reproduces the linearized dispersion relation
  w^2 = k^2 + 1/2, measured from the phase rotation of the Fourier mode.
"""

import numpy as np

import charwave as cw

AMP, K = 1e-3, 4.0
ws = cw.WaveSpeed.constant(1.0)
v0, v1 = cw.make_family("sine_packet", ws, amplitude=AMP, wavenumber=K, width=1.5)

# characteristic pipeline
data = cw.sample_initial(v0, v1, (-1.6, 1.6), 1e-3, ws)
curve = cw.build_boundary_curve(data, ws)
domain = cw.domain_for_time(curve, ws, 0.6, pad=0.3)
grid = cw.attach_coords(cw.solve_march(curve, domain, 0.01, 0.01, ws), curve)
s = cw.extract_time_slice(grid, 0.5)
print(f"characteristic slice at t=0.5: {len(s)} samples")

# upwind oracle on a finer grid
data_fd = cw.sample_initial(v0, v1, (-1.6, 1.6), 2.5e-4, ws)
run = cw.fd_solve(data_fd, ws, cfl=0.8, T=0.5, record_times=np.linspace(0, 0.5, 6))
print(f"upwind oracle: {run.status}, {len(run.snapshots)} snapshots")

linf, l2 = cw.compare(s, run.snapshots[-1])
print(f"\nagreement at t=0.5: Linf = {linf:.3e} ({linf / AMP:.2%} of the amplitude), "
      f"L2 = {l2:.3e}")

omega = cw.dispersion_fit(run.snapshots, K)
exact = np.sqrt(K * K + 0.5)
print(f"dispersion: observed w = {omega:.5f}, w(k)=sqrt(k^2+1/2) = {exact:.5f} "
      f"(relative error {abs(omega - exact) / exact:.2e})")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    snap = run.snapshots[-1]
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(snap.x, snap.v, label="upwind oracle", lw=2.5, alpha=0.5)
    ax.plot(s.x, s.v, label="characteristic pipeline", lw=1.0)
    ax.set(xlim=(-1.6, 2.2), xlabel="x", ylabel="v(0.5, x)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("crosscheck.png", dpi=130)
    print("wrote crosscheck.png")
except ImportError:
    pass
