from django.urls import path

from .views import BoundsView, ClassifyView, SequenceView, SweepView

app_name = 'hopf'

urlpatterns = [
    path('classify', ClassifyView.as_view(), name='classify'),
    path('sequence', SequenceView.as_view(), name='sequence'),
    path('bounds', BoundsView.as_view(), name='bounds'),
    path('sweep', SweepView.as_view(), name='sweep'),
]
