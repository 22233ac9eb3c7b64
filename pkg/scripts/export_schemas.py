#!/usr/bin/env python3
"""
Regenerate the JSON schemas shipped with the CLI from the pydantic models.
Usage: python scripts/export_schemas.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "packages"))
sys.path.insert(0, str(ROOT / "apps"))

from fde_cli.models import DigsicReport, RunConfig  # noqa: E402

SCHEMA_DIR = ROOT / "apps" / "fde_cli" / "schemas"

SCHEMAS = {
    "run_config.schema.json": RunConfig,
    "digsic_report.schema.json": DigsicReport,
}


def export() -> None:
    SCHEMA_DIR.mkdir(parents=True, exist_ok=True)
    for name, model in SCHEMAS.items():
        schema = model.model_json_schema()
        (SCHEMA_DIR / name).write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n")
        print(f"  Wrote {SCHEMA_DIR / name}")


if __name__ == "__main__":
    export()
