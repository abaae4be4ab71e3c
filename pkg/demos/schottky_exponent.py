# %% [markdown]
# Two estimates of the critical exponent of the genus-2 sample group: a
# Poincare-series bisection over word shells, and the growth of the orbit
# circle count as the radius cutoff shrinks.

# %%
import math

from kleinpack import estimate_delta, generate_orbit, sample_group
from kleinpack.counting import Disk, count_series, fit_exponent, log_grid
from kleinpack.schottky import validate

g = sample_group()
print(validate(g))

# %%
for n in (8, 10, 12):
    print(f"max_len {n:2d}: delta = {estimate_delta(g, n).delta:.4f}")

# %%
orbit = generate_orbit(g, 1e-4)
R = max(math.hypot(*c) + r for c, r in zip(orbit.centers, orbit.radii))
s = count_series(orbit, Disk((0, 0), R), log_grid(1e2, 1e4, 41))
print(len(orbit), "orbit circles; count exponent", round(fit_exponent(s).exponent, 4))
print("deepest words:", orbit.words[-3:])
