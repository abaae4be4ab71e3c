# %% [markdown]
# Counting circles in the (-1, 2, 2, 3) packing and the strip packing
# (0, 0, 1, 1), then reading off the growth exponent from a log-log fit.
# Run from the repository root: python3 demos/residual_dimension.py

# %%
import numpy as np

from kleinpack import generate_root
from kleinpack.counting import Disk, PeriodWindow, count_series, fit_exponent, log_grid
from kleinpack.render import render_svg

T_MAX = 10**4
grid = log_grid(1e2, T_MAX, 41)

# %%
bounded = generate_root((-1, 2, 2, 3), T_MAX)
strip = generate_root((0, 0, 1, 1), T_MAX)
print(len(bounded), "circles in the bounded packing,", len(strip), "per period in the strip")

# %%
fits = {}
for name, p, region in [("bounded", bounded, Disk((0, 0), 1)), ("strip", strip, PeriodWindow())]:
    s = count_series(p, region, grid)
    fits[name] = fit_exponent(s)
    print(f"{name:8s} exponent {fits[name].exponent:.4f}  rms {fits[name].rms_residual:.2e}")

# local slopes wander around the global fit; the window average is what is stable
s = count_series(bounded, Disk((0, 0), 1), grid)
slopes = np.diff(np.log(s.counts)) / np.diff(np.log(s.Ts))
print("local slope quartiles:", np.round(np.percentile(slopes, [25, 50, 75]), 3))

# %%
with open("residual_dimension.svg", "w") as fh:
    fh.write(render_svg(generate_root((-1, 2, 2, 3), 200), min_label_radius=0.04))
print("wrote residual_dimension.svg")
