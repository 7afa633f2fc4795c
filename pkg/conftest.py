import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'topic_modeller.settings')
django.setup()
