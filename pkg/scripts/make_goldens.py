"""Regenerate the frozen end-to-end golden files under tests/data/golden/.

Run from the repo root after any intentional change to templates, casting,
or fusion wording, then review the diff before committing.
"""

import json
from pathlib import Path

from tableinsights.analytics import AnalysisType
from tableinsights.fusion import ReportFormat, export, fuse
from tableinsights.pipeline import generate_candidates
from tableinsights.recommend import recommend_naive
from tableinsights.service import candidate_to_dict
from tableinsights.table import TableContext, parse_csv

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "data" / "golden"
CHEESE = ROOT / "src" / "tableinsights" / "data" / "cheese.csv"
TITLE = "Worldwide cheese market cap"


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    table = parse_csv(CHEESE.read_text(encoding="utf-8"))
    ctx = TableContext(title=TITLE)

    candidates = recommend_naive(generate_candidates(table, ctx))
    payload = json.dumps([candidate_to_dict(c) for c in candidates], indent=2)
    (GOLDEN / "cheese_insights.json").write_text(payload + "\n", encoding="utf-8")

    by_kind = {c.insight_type: c for c in candidates}
    picked = [by_kind[k] for k in
              (AnalysisType.MAX, AnalysisType.TREND, AnalysisType.SUM)]
    report = fuse(picked, ctx)
    (GOLDEN / "cheese_report.txt").write_bytes(export(report, ReportFormat.PLAIN))
    (GOLDEN / "cheese_report.md").write_bytes(export(report, ReportFormat.MARKDOWN))
    print(f"wrote 3 golden files to {GOLDEN}")
    print(report.body)


if __name__ == "__main__":
    main()
