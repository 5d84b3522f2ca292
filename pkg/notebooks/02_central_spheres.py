# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Central spheres
#
# For a planar measure and a level `alpha`, every normal `v` has a line with
# mass `alpha` on its positive side.  Taking the centre of mass of the density
# along that line gives a point `c(v)`; as `v` turns once around the circle,
# `c` traces a closed curve.

# %%
import numpy as np

from hamsplit.auxiliary import sample_central_sphere, turning_number, whitney_index
from hamsplit.geometry import Polytope
from hamsplit.measures import UniformPolytope
from hamsplit.scenarios import discontinuity_probe, regular_polygon, symmetry_defect

P = regular_polygon(5)
pentagon, hull = UniformPolytope(P), Polytope(P)

# %% [markdown]
# At `alpha = 1/2` the curve of the regular pentagon winds four times and has
# five-fold symmetry; it stays away from the centroid.

# %%
half = sample_central_sphere(pentagon, hull, 0.5, 1440)
print("turning number", turning_number(half))
print("symmetry defect", symmetry_defect(half.points, 5))
print("closest approach to centroid", np.linalg.norm(half.points, axis=1).min())

# %% [markdown]
# Near the boundary (`alpha = 0.05`) the curve is a single loop.

# %%
print(whitney_index(pentagon, hull, 0.05, grid_size=720))

# %%
from pathlib import Path

from hamsplit.auxiliary import curve_svg

Path("pentagon_half.svg").write_text(curve_svg(half, P))

# %% [markdown]
# ## A jump
#
# Three identical smooth caps touching a common line from alternate sides.
# With `alpha = 1/3` the vertical normal is ambiguous: tilting it slightly to
# either side picks a line through a different pair of caps, so the central
# sphere jumps by a fixed amount however small the tilt.

# %%
for eps in (1e-2, 1e-3, 1e-4):
    pr = discontinuity_probe("three_caps", eps)
    print(eps, pr.left, pr.right, pr.gap)
