import sys
from pathlib import Path

import numpy as np
import pytest

TESTS_DIR = Path(__file__).parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture
def rng():
    return np.random.default_rng(20190401)


@pytest.fixture
def tiny_recording():
    """Small mixed-rate recording with fractional start times."""
    from moodwear.ingest import ChannelKind, ChannelSeries, IbiSeries, SessionRecording

    start = 1554220000.25
    rng = np.random.default_rng(7)
    dur = 120
    channels = {
        ChannelKind.ACC_X: ChannelSeries(
            ChannelKind.ACC_X, start, 32.0, tuple(np.round(rng.normal(0, 3, 32 * dur)))
        ),
        ChannelKind.ACC_Y: ChannelSeries(
            ChannelKind.ACC_Y, start, 32.0, tuple(np.round(rng.normal(0, 3, 32 * dur)))
        ),
        ChannelKind.ACC_Z: ChannelSeries(
            ChannelKind.ACC_Z, start, 32.0, tuple(np.round(rng.normal(64, 3, 32 * dur)))
        ),
        ChannelKind.TEMP: ChannelSeries(
            ChannelKind.TEMP, start, 4.0, tuple(32 + 0.05 * rng.standard_normal(4 * dur))
        ),
        ChannelKind.EDA: ChannelSeries(
            ChannelKind.EDA, start, 4.0, tuple(2 + 0.1 * rng.random(4 * dur))
        ),
        ChannelKind.HR: ChannelSeries(
            ChannelKind.HR, start + 10.0, 1.0, tuple(70 + rng.standard_normal(dur - 10))
        ),
        ChannelKind.BVP: ChannelSeries(
            ChannelKind.BVP, start, 64.0, tuple(rng.standard_normal(64 * dur))
        ),
    }
    return SessionRecording(
        channels=channels,
        session_id="tiny",
        day=__import__("datetime").date(2019, 4, 2),
        ibi=IbiSeries(start, ((1.5, 0.8125), (2.3125, 0.8125))),
    )
