from django.apps import AppConfig


class LdaConfig(AppConfig):
    name = 'lda'
    verbose_name = 'Variational message passing for LDA'
