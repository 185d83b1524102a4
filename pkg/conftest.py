import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'logbm.settings')
django.setup()
