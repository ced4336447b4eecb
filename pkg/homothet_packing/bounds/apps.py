from django.apps import AppConfig


class BoundsConfig(AppConfig):
    name = "homothet_packing.bounds"
    verbose_name = "Bounds"
