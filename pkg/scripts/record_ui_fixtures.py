"""Record REST fixtures for the frontend test suite.

Runs the real service in-process and snapshots the responses the UI tests
replay. Also copies the core report goldens next to them and fails loudly
if the service's exports ever drift from those bytes.

Usage: python3 scripts/record_ui_fixtures.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from tableinsights.service import StoreConfig, create_app

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "data" / "golden"
CHEESE = (ROOT / "src" / "tableinsights" / "data" / "cheese.csv").read_text()
TITLE = "Worldwide cheese market cap"


def dump(name: str, payload) -> None:
    (FIXTURES / name).write_text(
        json.dumps(payload, indent=2) + "\n", encoding="utf-8"
    )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(StoreConfig(data_dir=Path(tmp), seed=0)))

        res = client.post("/sessions", json={"csv": CHEESE, "title": TITLE, "seed": 0})
        assert res.status_code == 201, res.text
        session = res.json()
        dump("session_cheese.json", session)

        by_kind = {c["insight_type"]: c for c in session["candidates"]}
        picked = [by_kind[k]["id"] for k in ("MAX", "TREND", "SUM")]
        res = client.post(
            f"/sessions/{session['id']}/report", json={"selected_ids": picked}
        )
        assert res.status_code == 200, res.text
        report = res.json()
        dump("report_cheese.json", report)

        res = client.get(f"/sessions/{session['id']}/insights")
        assert res.status_code == 200 and res.json()["selections"] == picked
        dump("insights_after_report.json", res.json())

        plain = client.get(f"/reports/{report['id']}", params={"format": "plain"})
        markdown = client.get(f"/reports/{report['id']}", params={"format": "markdown"})
        assert plain.content == (GOLDEN / "cheese_report.txt").read_bytes()
        assert markdown.content == (GOLDEN / "cheese_report.md").read_bytes()
        (FIXTURES / "core_report.txt").write_bytes(plain.content)
        (FIXTURES / "core_report.md").write_bytes(markdown.content)

        max_id = by_kind["MAX"]["id"]
        res = client.patch(
            f"/sessions/{session['id']}/insights/{max_id}",
            json={"text": f"{TITLE}: the maximum Market cap was 91.2, recorded in 2022."},
        )
        assert res.status_code == 200, res.text
        edited = res.json()
        assert edited["faithfulness"] < 1.0
        dump("candidate_edited.json", edited)

        res = client.post("/sessions", json={"csv": "X,Y\na,1\nb,2,3\n", "title": "Bad"})
        assert res.status_code == 400, res.text
        dump("error_ragged.json", res.json())

    print(f"recorded {len(list(FIXTURES.iterdir()))} fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()
