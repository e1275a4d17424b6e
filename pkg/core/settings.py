"""
Django settings for core project.

只用到管理命令和测试框架, 没有数据库、URL 和模板。
数值参数集中在 LAYERED_GREEN, 由 core.conf.green_settings 读取。
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# 加载.env文件
load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('SECRET_KEY', 'default-insecure-key')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # 第三方库
    'rest_framework',

    # 我们自己的 Apps
    'basis_algebra.apps.BasisAlgebraConfig',
    'stack.apps.StackConfig',
    'maxwell.apps.MaxwellConfig',
    'elastic.apps.ElasticConfig',
    'oracle.apps.OracleConfig',
    'hankel.apps.HankelConfig',
    'cli.apps.CliConfig',
]

# 不用数据库, 测试全部是 SimpleTestCase
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LOG_LEVEL = os.environ.get('LOG_LEVEL', 'WARNING')

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
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
}

# 数值参数, 缺省值见 core/conf.py 的 DEFAULTS
LAYERED_GREEN = {
    'THREADS': int(os.environ.get('LAYERED_GREEN_THREADS', '1')),
    'LOSS': float(os.environ.get('LAYERED_GREEN_LOSS', '0.0')),
    'CONDITION_LIMIT': float(os.environ.get('LAYERED_GREEN_CONDITION_LIMIT', '1e12')),
    'QUADRATURE': {
        'TRUNCATION_FACTOR': 12.0,
        'PANELS': 200,
        'RTOL': 1e-7,
        'LOSS': 1e-5,
    },
}
