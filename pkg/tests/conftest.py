import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# Property tests over numpy-backed geometry can be slow per example on a cold
# cache; the deadline adds flakiness without catching anything here.
settings.register_profile(
    "trajclean",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("trajclean")

sys.path.insert(0, str(Path(__file__).parent))
