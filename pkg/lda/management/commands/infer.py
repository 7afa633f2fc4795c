import json

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from lda.engine import FitOptions, infer_document
from lda.forms import InferForm
from lda.helpers import RUNTIME_ERROR, reports_command_errors, validate_options
from lda.ingest import encode_document
from lda.model import load_model


class Command(BaseCommand):
    """Estimate topic proportions of new documents under a saved model."""

    help = 'Infers the topic mixture of every line of a text file'

    def add_arguments(self, parser):
        parser.add_argument('--model', required=True, help='model JSON written by train')
        parser.add_argument('--input', required=True, help='text file, one document per line')
        parser.add_argument('--epochs', type=int, default=settings.LDA_INFER_EPOCHS)
        parser.add_argument('--tol', type=float, default=settings.LDA_INFER_TOL)

    @reports_command_errors
    def handle(self, *args, **options):
        params = validate_options(InferForm, options)
        model = load_model(params['model'])
        fit_options = FitOptions(max_epochs=params['epochs'], tol=params['tol'])

        succeeded = 0
        with open(params['input'], encoding='utf-8') as handle:
            for index, line in enumerate(handle):
                record = self.infer_line(model, index, line, fit_options)
                succeeded += 'theta' in record
                self.stdout.write(json.dumps(record))
        if not succeeded:
            raise CommandError('no document could be inferred', returncode=RUNTIME_ERROR)

    def infer_line(self, model, index, line, fit_options):
        """Return the JSON record of one input line."""
        document, unknown = encode_document(line, model.vocab)
        if document is None:
            if unknown:
                return {'doc': index, 'error': f'no token is in the model vocabulary: {" ".join(unknown)}'}
            return {'doc': index, 'error': 'empty document'}
        alpha = infer_document(model.state, document, model.hyper, fit_options)
        return {'doc': index, 'theta': (alpha / alpha.sum()).tolist()}
