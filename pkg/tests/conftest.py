import os

import pytest

from facepipe import synth

TESTS_DIR = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(TESTS_DIR, "data")
GOLDEN_DIR = os.path.join(TESTS_DIR, "golden")
REPO_DIR = os.path.dirname(TESTS_DIR)
CALIB_DIR = os.path.join(REPO_DIR, "calib")

CROSSING_SCENARIO = os.path.join(DATA_DIR, "crossing.scn")
IOU_CONFIG = os.path.join(DATA_DIR, "iou.cfg")
DCF_CONFIG = os.path.join(DATA_DIR, "dcf.cfg")
TABLE_CALIBRATION = os.path.join(CALIB_DIR, "table1.cal")
GATING_CALIBRATION = os.path.join(CALIB_DIR, "gating.cal")


@pytest.fixture(scope="session")
def crossing_dir(tmp_path_factory):
    """The committed crossing scenario, generated once per session."""
    out = tmp_path_factory.mktemp("crossing")
    spec = synth.parse_scenario(CROSSING_SCENARIO)
    synth.generate(spec, str(out))
    return str(out)
