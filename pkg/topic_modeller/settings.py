"""
Django settings for the topic_modeller project.

Generated by 'django-admin startproject' using Django 4.2.6 and trimmed to
what the management commands need: there are no views, templates or
database models in this project.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-0q#v7l!w3m2x$e9k5r^t8p1z@n4c6b&h(j)d_f+s=a*g-y',
)

DEBUG = os.environ.get('DJANGO_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'lda',
]


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

USE_I18N = True

# Set explicitly: Django 4.2 warns while USE_TZ is left at its default.
USE_TZ = False


# Logging: library modules log under the 'lda' namespace to standard error.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'lda': {
            'handlers': ['console'],
            'level': os.environ.get('LDA_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}


# Command-line defaults for training

LDA_DEFAULT_ALPHA = 0.1
LDA_DEFAULT_BETA = 0.01
LDA_DEFAULT_EPOCHS = 100
LDA_DEFAULT_TOL = 1e-4
LDA_DEFAULT_SEED = 0
LDA_DEFAULT_MIN_COUNT = 1
LDA_DEFAULT_THREADS = 1

# Words listed per topic by the topics command
LDA_TOPIC_WORDS = 10

# Fold-in inference for unseen documents
LDA_INFER_EPOCHS = 100
LDA_INFER_TOL = 1e-6
