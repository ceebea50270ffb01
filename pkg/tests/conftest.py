import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gpcb.confidence import ConfidenceTable, calibrate_confidence, calibration_key
from gpcb.cyclic import get_code
from gpcb.siho import DecoderConfig

# Calibration setups shared by the turbo and acceptance tests.  Tables are
# cached in pytest's cache directory so repeated runs skip the simulation.
_CALIBRATIONS = {
    "bch-63-51": dict(grid=(1.0, 2.0, 3.0, 4.0, 5.0), frames=3000, bins=32, seed=101),
    "qr-47-24": dict(grid=(0.0, 1.0, 2.0, 3.0, 4.0), frames=2000, bins=32, seed=101),
    "qr-7-4": dict(grid=(2.0, 4.0, 6.0), frames=1500, bins=12, seed=101),
}


def _table(request, code_name: str, p: int) -> ConfidenceTable:
    setup = _CALIBRATIONS[code_name]
    key = calibration_key(code_name, p, setup["grid"], setup["frames"],
                          setup["bins"], setup["seed"])
    cache_dir = Path(request.config.cache.mkdir("gpcb-tables"))
    path = cache_dir / f"{code_name}-p{p}-{key}.csv"
    if path.exists():
        return ConfidenceTable.load(path)
    table = calibrate_confidence(
        get_code(code_name),
        DecoderConfig(p=p),
        list(setup["grid"]),
        setup["frames"],
        bins=setup["bins"],
        seed=setup["seed"],
    )
    table.save(path)
    return table


@pytest.fixture(scope="session")
def bch63_table(request):
    return _table(request, "bch-63-51", p=4)


@pytest.fixture(scope="session")
def qr47_table(request):
    return _table(request, "qr-47-24", p=4)


@pytest.fixture(scope="session")
def qr7_table(request):
    return _table(request, "qr-7-4", p=2)
