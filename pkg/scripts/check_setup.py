#!/usr/bin/env python3
"""Check that the scientific stack imports and the bundled data parses."""

import importlib.util
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

REQUIRED_MODULES = ["numpy", "scipy", "pandas", "pydantic", "dotenv", "tqdm"]


def _check_imports() -> tuple[bool, str]:
    missing = [name for name in REQUIRED_MODULES if importlib.util.find_spec(name) is None]
    if missing:
        return False, f"missing module(s): {', '.join(missing)}"
    return True, ""


def _check_data() -> tuple[bool, str]:
    try:
        from src.core.instance_io import read_instance_csv
        from src.instances import load_trace_pool
        from src.mechanisms import run_tag

        for name in ("example1.csv", "example2.csv"):
            run_tag("drf", read_instance_csv(REPO_ROOT / "data" / name))
        pool = load_trace_pool(REPO_ROOT / "data" / "sample_trace.csv")
        if pool.size == 0:
            return False, "sample trace is empty"
        return True, ""
    except Exception as e:
        return False, str(e)


def test_imports() -> None:
    ok, error = _check_imports()
    assert ok, f"Import failed: {error}"


def test_bundled_data() -> None:
    ok, error = _check_data()
    assert ok, f"Bundled data check failed: {error}"


def main():
    print("Checking setup...\n")

    imports_ok, imports_error = _check_imports()
    if imports_ok:
        print("✅ All packages imported successfully")
    else:
        print(f"❌ Import failed: {imports_error}")

    data_ok, data_error = _check_data() if imports_ok else (False, "skipped")
    if data_ok:
        print("✅ Bundled instances and trace parse")
    else:
        print(f"❌ Bundled data check failed: {data_error}")

    if imports_ok and data_ok:
        print("\n✅ Setup is complete.")
        return 0
    print("\n❌ Some checks failed. See errors above.")
    return 1


if __name__ == "__main__":
    sys.exit(main())
