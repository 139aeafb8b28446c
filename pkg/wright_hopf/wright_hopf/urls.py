"""wright_hopf URL Configuration

Единственная точка входа HTTP: /api/v1/ (классификация, оценки периода, развёртки).
"""
from django.urls import path, include

urlpatterns = [
    path('api/v1/', include('hopf.urls', namespace='hopf')),
]
