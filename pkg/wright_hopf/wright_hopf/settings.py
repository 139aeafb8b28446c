import os
import sentry_sdk

from sentry_sdk.integrations.django import DjangoIntegration

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SENTRY_DSN = os.environ.get('SENTRY_DSN')
if SENTRY_DSN:
    sentry_sdk.init(
        dsn=SENTRY_DSN,
        integrations=[DjangoIntegration()]
    )

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'wright-hopf-local-development-key')

DEBUG = os.environ.get('DJANGO_DEBUG', 'true').lower() in ('1', 'true', 'yes')

ALLOWED_HOSTS = ['*']

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.staticfiles',
    'rest_framework',
    'hopf.apps.HopfConfig',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'wright_hopf.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
            ],
        },
    },
]

# Моделей нет, БД нужна только фреймворку
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
    }
}

LANGUAGE_CODE = 'ru-ru'
TIME_ZONE = 'Europe/Moscow'
USE_I18N = True
USE_TZ = True

STATIC_ROOT = os.path.join(BASE_DIR, 'static')
STATIC_URL = '/static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# файл с именованными экспериментами для --config
EXPERIMENTS_FILE = os.path.join(os.path.dirname(BASE_DIR), 'data', 'experiments.yaml')

REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_THROTTLE_CLASSES': [
        'rest_framework.throttling.AnonRateThrottle',
    ],
    'DEFAULT_THROTTLE_RATES': {
        'anon': os.environ.get('HOPF_API_RATE', '1000/hour'),
    },
    'COERCE_DECIMAL_TO_STRING': False,
}

# Численные параметры по умолчанию
# шаг всегда 1/m, задаётся числом m
HOPF_DEFAULT_STEP = 1.0 / int(os.environ.get('HOPF_STEPS_PER_DELAY', '64'))
HOPF_DEFAULT_T_END = float(os.environ.get('HOPF_DEFAULT_T_END', '200'))
HOPF_HORIZON_CAP = float(os.environ.get('HOPF_HORIZON_CAP', '10000'))
HOPF_ESCAPE_LEVEL = float(os.environ.get('HOPF_ESCAPE_LEVEL', '1e6'))
HOPF_DEGENERACY_TOL = float(os.environ.get('HOPF_DEGENERACY_TOL', '1e-12'))
HOPF_TAIL_WINDOW = float(os.environ.get('HOPF_TAIL_WINDOW', '40'))
# оценки с переключением опираются на почти вырожденные соседние ветви, дальше этого eta их не сверяем
HOPF_SWITCHING_CHECK_ETA_MAX = float(os.environ.get('HOPF_SWITCHING_CHECK_ETA_MAX', '0.02'))
HOPF_SIGNIFICANT_DIGITS = 12

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'hopf': {
            'handlers': ['console'],
            'level': os.environ.get('HOPF_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}

# REDIS related settings
REDIS_HOST = os.environ.get('REDIS_HOST', 'localhost')
REDIS_PORT = os.environ.get('REDIS_PORT', '6379')
CELERY_BROKER_URL = 'redis://' + REDIS_HOST + ':' + REDIS_PORT + '/0'
CELERY_BROKER_TRANSPORT_OPTIONS = {'visibility_timeout': 3600}
CELERY_RESULT_BACKEND = 'redis://' + REDIS_HOST + ':' + REDIS_PORT + '/0'
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
# по умолчанию задачи выполняются в том же процессе, брокер не нужен
CELERY_TASK_ALWAYS_EAGER = os.environ.get('CELERY_TASK_ALWAYS_EAGER', 'true').lower() in ('1', 'true', 'yes')
CELERY_TASK_EAGER_PROPAGATES = True
