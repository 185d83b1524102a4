"""
Django settings for the logbm project.

The project carries no web surface: it hosts the ``zonoids`` app, whose
management commands drive the verification engine.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY', 'logbm-insecure-local-key-only-used-for-commands')

DEBUG = os.environ.get('DJANGO_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'zonoids.apps.ZonoidsConfig',
]

REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'UNAUTHENTICATED_USER': None,
}

# No database: every test case is a SimpleTestCase.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Verification engine
#
# LOGBM_THREADS caps trial-level parallelism of the random suite.

LOGBM = {
    'BACKEND': os.environ.get('LOGBM_BACKEND', 'exact'),
    'THREADS': int(os.environ.get('LOGBM_THREADS', '1')),
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
        'OUTPUT_DIR': BASE_DIR / 'reports',
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


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'zonoids': {
            'handlers': ['console'],
            'level': os.environ.get('LOGBM_LOG_LEVEL', 'WARNING'),
        },
    },
}
