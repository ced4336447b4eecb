from .base import *  # noqa: F403
from .base import env

# GENERAL
# ------------------------------------------------------------------------------
# https://docs.djangoproject.com/en/dev/ref/settings/#debug
DEBUG = True
# https://docs.djangoproject.com/en/dev/ref/settings/#secret-key
SECRET_KEY = env(
    "DJANGO_SECRET_KEY",
    default="Vq2xTn8KcLw4Hr9bPz6MfYs3Dj7Ga5EuRk1NtXo0WpCi",
)
# Your stuff...
# ------------------------------------------------------------------------------
