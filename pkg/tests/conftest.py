import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from relrips.cayley import build_ball  # noqa: E402
from relrips.coned import build_coned_ball  # noqa: E402
from relrips.presentation import load_presentation  # noqa: E402

GOLDEN = HERE / "golden"


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session")
def load():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_presentation(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def coned(load):
    cache = {}

    def get(name, R):
        if (name, R) not in cache:
            pres, k = load(name)
            cache[(name, R)] = build_coned_ball(build_ball(pres, R), k)
        return cache[(name, R)]

    return get


@pytest.fixture(scope="session")
def check_golden():
    """Compare text with a golden file; RELRIPS_UPDATE_GOLDEN=1 rewrites it."""
    import os

    def check(name: str, text: str):
        path = GOLDEN / name
        if os.environ.get("RELRIPS_UPDATE_GOLDEN") == "1" or not path.exists():
            if os.environ.get("RELRIPS_UPDATE_GOLDEN") != "1":
                pytest.fail(f"golden file {name} is missing (set RELRIPS_UPDATE_GOLDEN=1)")
            path.write_text(text, encoding="utf-8")
        assert text == path.read_text(encoding="utf-8"), f"output differs from golden {name}"

    return check
