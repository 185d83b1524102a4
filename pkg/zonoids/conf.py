"""
Engine settings, resolved against ``settings.LOGBM``.

Modules read ``logbm_settings.TOLERANCE['FLOAT']`` and friends; missing keys
fall back to the defaults below.
"""
import copy
from contextlib import contextmanager

from django.conf import settings
from django.core.signals import setting_changed

DEFAULTS = {
    'BACKEND': 'exact',
    'THREADS': 1,
    'TOLERANCE': {
        'FLOAT': 1e-9,
        'LOG_ULPS': 8,
        'SPECTRAL': 1e-3,
        'QUADRATURE': 1e-8,
        'GEOMEAN': 1e-6,
    },
    'SUITE': {
        'SEED': 42,
        'TRIALS': 100,
        'DIMS': (2, 4),
        'GENERATORS': (2, 6),
        'COORDINATE_BOUND': 5,
        'OUTPUT_DIR': 'reports',
    },
    'SPECTRAL': {
        'GRID': 2048,
        'LEVEL': 5,
        'LEVELS': (4, 6),
    },
    'GEOMEAN': {
        'DIRECTIONS': 200,
    },
    'HULL': {
        'BRUTE_FORCE_SUBSETS': 50000,
    },
}


class LogbmSettings:

    def __init__(self, user_settings=None, defaults=None):
        self._user_settings = user_settings
        self.defaults = defaults or DEFAULTS
        self._cached_attrs = set()

    @property
    def user_settings(self):
        if self._user_settings is None:
            self._user_settings = getattr(settings, 'LOGBM', {})
        return self._user_settings

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError("Invalid LOGBM setting: '%s'" % attr)

        default = self.defaults[attr]
        value = self.user_settings.get(attr, default)
        if isinstance(default, dict):
            merged = copy.deepcopy(default)
            merged.update(value)
            value = merged

        self._cached_attrs.add(attr)
        setattr(self, attr, value)
        return value

    def reload(self):
        for attr in self._cached_attrs:
            delattr(self, attr)
        self._cached_attrs.clear()
        self._user_settings = None


logbm_settings = LogbmSettings()


def reload_logbm_settings(*args, **kwargs):
    if kwargs['setting'] == 'LOGBM':
        logbm_settings.reload()


setting_changed.connect(reload_logbm_settings)


@contextmanager
def override_tolerance(**values):
    """Temporarily replace entries of ``logbm_settings.TOLERANCE`` (CLI flags)."""
    previous = logbm_settings.TOLERANCE
    logbm_settings.TOLERANCE = dict(previous, **{k: v for k, v in values.items() if v is not None})
    try:
        yield logbm_settings.TOLERANCE
    finally:
        logbm_settings.TOLERANCE = previous
