"""
TOPSIS with interval-valued scores
==================================

Three suppliers rated on quality, lead time and price. Some ratings are
intervals; price and lead time are cost criteria. Every intermediate table
is printed.
"""

# %%
from ahptopsis import CriterionSpec, WeightVector, run_topsis, whiten_scores
from ahptopsis.render import render_topsis

criteria = [
    CriterionSpec("quality", "Quality"),
    CriterionSpec("lead", "Lead time (days)", "cost"),
    CriterionSpec("price", "Unit price", "cost"),
]
scores = {
    "north": {"quality": [[7, 9], 8], "lead": [12], "price": [[4.0, 4.6]]},
    "south": {"quality": [6, 7], "lead": [[5, 9]], "price": [3.9]},
    "east": {"quality": [[8, 10]], "lead": [20, 16], "price": [5.2]},
}

# %%
# Intervals collapse to their midpoints, then each cell averages its entries.
d = whiten_scores(scores, list(scores), criteria)
print(d.scores)

# %%
w = WeightVector([0.5, 0.2, 0.3], d.criterion_ids)
trace = run_topsis(d, w)
print(render_topsis(trace.to_dict(), full=True))

# %%
# A pessimistic reading uses each interval's lower end.
pessimistic = run_topsis(whiten_scores(scores, list(scores), criteria, policy=0.0), w)
print(pessimistic.ranking.ids)
