"""
Celery для развёрток: каждая точка eta считается отдельной задачей hopf.tasks.sweep_cell.
При CELERY_TASK_ALWAYS_EAGER (по умолчанию) задачи выполняются в вызывающем процессе.
"""
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'wright_hopf.settings')

app = Celery('wright_hopf')

app.config_from_object('django.conf:settings', namespace='CELERY')

# точки развёртки долгие, воркер берёт по одной
app.conf.worker_prefetch_multiplier = 1
app.conf.task_routes = {'hopf.tasks.sweep_cell': {'queue': 'sweeps'}}

app.autodiscover_tasks()
