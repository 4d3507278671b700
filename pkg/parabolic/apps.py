from django.apps import AppConfig


class ParabolicConfig(AppConfig):
    name = "parabolic"
    verbose_name = "Parabolic cylinder products"
