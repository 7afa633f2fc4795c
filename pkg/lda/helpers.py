import functools

from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from lda.exceptions import LdaError
from lda.forms import errors_as_text

ARGUMENT_ERROR = 2
RUNTIME_ERROR = 1


def validate_options(form_class, options):
    """Bind command options to ``form_class`` and return the cleaned values.

    Invalid options end the command with exit status 2.
    """
    form = form_class(data={name: options.get(name) for name in form_class.base_fields})
    if not form.is_valid():
        raise CommandError(errors_as_text(form), returncode=ARGUMENT_ERROR)
    return form.cleaned_data


def reports_command_errors(handle):
    """Decorator for command handlers that turns library failures into exit status 1."""

    @functools.wraps(handle)
    def modified_handle(self, *args, **options):
        try:
            return handle(self, *args, **options)
        except (LdaError, OSError, UnicodeDecodeError) as error:
            raise CommandError(str(error), returncode=RUNTIME_ERROR) from error
        except ValidationError as error:
            raise CommandError('; '.join(error.messages), returncode=RUNTIME_ERROR) from error
    return modified_handle
