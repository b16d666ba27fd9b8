import json
import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spectrum_fls import default_rulebase  # noqa: E402


@pytest.fixture(scope="session")
def rb():
    return default_rulebase()


@pytest.fixture(scope="session")
def rb_doc():
    text = resources.files("spectrum_fls").joinpath("data", "default_rulebase.json").read_text()
    return json.loads(text)
