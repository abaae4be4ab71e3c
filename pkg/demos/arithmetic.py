# %% [markdown]
# Arithmetic of the integral packing (-1, 2, 2, 3): primes, twin primes,
# distinct curvatures, the mod-16 residue pattern, and the same quadruples
# seen on the sphere.

# %%
from kleinpack import generate_root, realize_root
from kleinpack.apollonian import iter_quadruples
from kleinpack.counting import distinct_curvatures, prime_pi, residue_scan, twin_prime_pi
from kleinpack.spherical import planar_spherical_curvature, soddy_gossett_residual

p = generate_root((-1, 2, 2, 3), 10**4)

# %%
print("    T    pi  twin  distinct")
for T in (10, 100, 1000, 10000):
    print(f"{T:5d} {prime_pi(p, T):5d} {twin_prime_pi(p, T):5d} {distinct_curvatures(p, T):9d}")

# %%
print(residue_scan(16))
print(residue_scan(2))  # mod 2 alone cannot see the pattern

# %%
worst = max(abs(soddy_gossett_residual(*map(planar_spherical_curvature, q)))
            for q in iter_quadruples(realize_root((-1, 2, 2, 3)), 500))
print("largest Soddy-Gossett residual on the sphere:", worst)
