"""
Combining several experts into one weight vector
================================================

Six experts supplied priority vectors together with their own consistency
ratios. We average them, compare arithmetic and geometric pooling, and keep
the five strongest criteria.
"""

# %%
from importlib import resources

from ahptopsis import aggregate_expert_priorities, rank_criteria, renormalize_weights, select_top_k
from ahptopsis.project import load_project

proj = load_project(resources.files("ahptopsis") / "data" / "scres_case.json")
vectors = [sp.priorities for _, sp in proj.panel.experts]
print([(eid, sp.cr) for eid, sp in proj.panel.experts])

# %%
arith = aggregate_expert_priorities(vectors, "arithmetic")
geo = aggregate_expert_priorities(vectors, "geometric")
for cid, a, g in zip(arith.criterion_ids, arith.weights, geo.weights):
    print(f"{cid:28s} arithmetic {a:.4f}   geometric {g:.4f}")

# %%
ranking = rank_criteria(arith)
chosen, straddles = select_top_k(ranking, 5)
print("top five:", chosen, "| tie across the cut:", straddles)

# %%
# The retained weights are rescaled so they sum to one again.
print(renormalize_weights(arith, chosen).as_dict())
