"""
End to end: expert panel, criterion cut, alternative ranking, charts
====================================================================

Runs the packaged resilience case, saves the structured report and draws
both bar charts as SVG into ``demo_output/``.
"""

# %%
from importlib import resources
from pathlib import Path

from ahptopsis.chart import chart_from_report
from ahptopsis.project import load_project, load_report, run_project, write_bytes_atomic, write_text_atomic
from ahptopsis.render import render_pipeline

out = Path("demo_output")
out.mkdir(exist_ok=True)

proj = load_project(resources.files("ahptopsis") / "data" / "scres_case.json")
report = run_project(proj)
print(render_pipeline(report.to_dict()))

# %%
write_text_atomic(out / "report.json", report.to_json())
saved = load_report(out / "report.json")
assert saved.to_json() == report.to_json()

# %%
for which in ("weights", "closeness"):
    write_bytes_atomic(out / f"{which}.svg", chart_from_report(saved.to_dict(), which))
    print("wrote", out / f"{which}.svg")
