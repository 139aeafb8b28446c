import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'wright_hopf.settings')
django.setup()
