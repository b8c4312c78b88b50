import os
import sys

import pytest

# allow for import of zoozve
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from zoozve.main import main
from zoozve.settings import CONFIG_KEYS, ENV_PREFIX

DEMOS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "demos")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep ZOOZVE_* variables of the developer's shell out of the runs."""
    for key in CONFIG_KEYS:
        monkeypatch.delenv(ENV_PREFIX + key.upper(), raising=False)


@pytest.fixture
def demo():
    """Absolute path of a file under demos/."""
    return lambda name: os.path.join(DEMOS, name)


@pytest.fixture
def cli(capsys):
    """
    Runs the command line in-process.
    Returns (exit code, stdout, stderr) of one invocation.
    """
    def invoke(*argv):
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke
