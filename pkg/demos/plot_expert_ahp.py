"""
Weighting criteria from one expert's pairwise judgments
=======================================================

Loads a 10x10 comparison matrix stored as a semicolon CSV with decimal
commas, derives priorities two ways and checks consistency against both
random-index presets.
"""

# %%
from importlib import resources

import numpy as np

from ahptopsis import consistency, normalized_pairwise, priority_eigenvector, priority_row_average, validate_pairwise
from ahptopsis.project import read_matrix_csv

ids, grid = read_matrix_csv(resources.files("ahptopsis") / "data" / "expert4_pairwise.csv")
m = validate_pairwise(grid, ids)
print(m.n, "criteria; worst reciprocity residual", m.reciprocity_residual())

# %%
# Column normalization followed by row means gives the quick estimate.
np.set_printoptions(precision=4, suppress=True)
print(normalized_pairwise(m)[:3])
w_ra = priority_row_average(m)

# %%
# Power iteration converges to the principal eigenvector.
w_ev = priority_eigenvector(m)
for cid, a, b in zip(ids, w_ra.weights, w_ev.weights):
    print(f"{cid:28s} {a:.4f} {b:.4f}")

# %%
# The consistency ratio depends on which random-index table is used.
for preset in ("saaty-classic", "paper-table2"):
    rep = consistency(m, w_ra, preset)
    print(f"{preset:14s} lambda_max={rep.lambda_max:.4f} CI={rep.ci:.5f} RI={rep.ri} CR={rep.cr:.5f} ok={rep.acceptable}")
