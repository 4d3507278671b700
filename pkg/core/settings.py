"""
Django settings for the parabolic verification project.

The project has no web surface: Django hosts the management commands,
settings and the test runner for the `parabolic` app.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv("SECRET_KEY", "django-insecure-fallback-key-change-me")

DEBUG = os.getenv("DEBUG", "False") == "True"


# Application definition

INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "django.contrib.auth",
    "rest_framework",
    "parabolic",
]


# Database (required by the test runner bootstrap, never queried)

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# Numerical configuration

PCF_MAX_THREADS = int(os.getenv("PCF_MAX_THREADS", os.cpu_count() or 1))
PCF_REPORT_TIMING = os.getenv("PCF_REPORT_TIMING", "False") == "True"
PCF_QUAD_ABS_TOL = float(os.getenv("PCF_QUAD_ABS_TOL", "1e-13"))
PCF_QUAD_REL_TOL = float(os.getenv("PCF_QUAD_REL_TOL", "1e-11"))
PCF_QUAD_MAX_EVALUATIONS = int(os.getenv("PCF_QUAD_MAX_EVALUATIONS", "200000"))
PCF_TOOL_VERSION = os.getenv("PCF_TOOL_VERSION", "1.0.0")
PCF_LOG_LEVEL = os.getenv("PCF_LOG_LEVEL", "INFO")


# Logging

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "parabolic": {
            "handlers": ["console"],
            "level": PCF_LOG_LEVEL,
            "propagate": False,
        },
    },
}
