from django.apps import AppConfig


class PackingsConfig(AppConfig):
    name = "homothet_packing.packings"
    verbose_name = "Packings"
