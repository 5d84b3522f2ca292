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
# # Four-part partitions and existence certificates

# %%
import numpy as np

from hamsplit.measures import UniformBall, UniformPolytope
from hamsplit.miranda import Box, check_faces, miranda_root
from hamsplit.partitions import two_line_partition
from hamsplit.solver import Problem, SplitConfig, find_split

# %% [markdown]
# ## Two lines, four prescribed masses
#
# The first line (normal `v`) separates `alpha_1 + alpha_2` from the rest.
# Each side, renormalised, becomes its own measure, and one more line splits
# both in the required ratios.

# %%
square = UniformPolytope(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float))
part = two_line_partition(square, (0.1, 0.4, 0.1, 0.4))
print(part.H1, part.H2)
print(np.round(part.quadrant_masses, 9))

# %%
disc = UniformBall((0, 0), 1)
part = two_line_partition(disc, (0.3, 0.2, 0.3, 0.2), v=(np.cos(0.7), np.sin(0.7)))
print(part.residual_norm)

# %% [markdown]
# ## Poincaré–Miranda boxes
#
# If each component of a map keeps opposite signs on a pair of opposite
# facets of a box, the map has a zero inside.  Facets are checked on a grid.

# %%
cert = check_faces(lambda z: np.array([z[0] + 0.3 * z[1], z[1] - 0.2 * z[0]]), Box.cube(2))
print(cert.verdict, [round(c.min_observed, 3) for c in cert.conditions])

# %%
box, cert = miranda_root(lambda z: np.array([z[0] - 0.25, z[1] + 0.5]), Box.cube(2), tol=1e-6)
print(box, cert.verdict)

# %% [markdown]
# The solver can attach such a certificate to a split: the box lives in
# coordinates (tangent chart of the normal, offset) around the hyperplane.

# %%
problem = Problem((UniformBall((-3, 0), 1), UniformBall((3, 0), 1)), (0.3, 0.7))
res = find_split(problem, SplitConfig(certify=True))
print(res.certificate.verdict, res.certificate.box)
