import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from toricstab.cli import load_model

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile(
    "toric", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("toric")

DEL_PEZZO = ("p2", "p1xp1", "bl1p2", "bl2p2", "bl3p2")
BENCHMARK = ("p2", "p1xp1", "bl1p2")


def model(stem):
    return _models.setdefault(stem, load_model(CORPUS / f"{stem}.json"))


_models = {}


@pytest.fixture(params=DEL_PEZZO)
def del_pezzo(request):
    return model(request.param)


@pytest.fixture(params=BENCHMARK)
def benchmark_model(request):
    return model(request.param)


@pytest.fixture
def p2():
    return model("p2")


@pytest.fixture
def bl1():
    return model("bl1p2")
