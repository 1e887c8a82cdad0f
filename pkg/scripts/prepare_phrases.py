"""Generate the bundled search-phrase registry (src/windkg/data/phrases.json).

Two phrases are the published examples (preventive actions for blades, and
corrective actions for an abnormal feature description); the rest are the same
pattern repeated for every sub-system, for preventive and predictive actions.
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
MANIFEST = ROOT / "src" / "windkg" / "data" / "manifest.json"
OUT = ROOT / "src" / "windkg" / "data" / "phrases.json"


def main() -> None:
    manifest = json.loads(MANIFEST.read_text(encoding="utf-8"))
    phrases = [
        {
            "template": "Preventive actions for blades",
            "description": "Preventive maintenance actions for the wind turbine's blades",
            "query": "MATCH(n:Preventive)-[:ACTION]-(p)-[]-(q:Blades) RETURN *",
            "params": {},
        },
        {
            "template": "Corrective actions for abnormal $description",
            "description": "Corrective maintenance actions for [Choose feature description] abnormal important feature",
            "query": "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:RELATESTO]-(r:Feature) "
            "WHERE r.description = $description RETURN *",
            "params": {"description": {"source": "MATCH(n:Feature) RETURN n.description", "column": "n.description"}},
        },
    ]
    subsystems = [s for s in manifest["subsystems"] + manifest["components"] if s["label"] != "Component"]
    for kind in ("Preventive", "Predictive"):
        for sub in subsystems:
            name = sub["properties"]["name"]
            template = f"{kind} actions for {name.lower()}"
            if any(p["template"] == template for p in phrases):
                continue
            phrases.append(
                {
                    "template": template,
                    "description": f"{kind} maintenance actions for the {name} sub-system",
                    "query": f"MATCH(n:{kind})-[:ACTION]-(p)-[]-(q:{sub['label']}) RETURN *",
                    "params": {},
                }
            )
    doc = {"registry_version": 1, "phrases": [{"id": i, **p} for i, p in enumerate(phrases, 1)]}
    OUT.write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(phrases)} phrases)")


if __name__ == "__main__":
    main()
