from django.apps import AppConfig


class HopfConfig(AppConfig):
    name = 'hopf'
    verbose_name = 'Бифуркации Хопфа уравнения Райта'
