from django.apps import AppConfig


class ConstructionsConfig(AppConfig):
    name = "homothet_packing.constructions"
    verbose_name = "Constructions"
