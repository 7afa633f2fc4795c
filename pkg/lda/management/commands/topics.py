from django.conf import settings
from django.core.management.base import BaseCommand

from lda.evaluation import report_to_json, topic_report
from lda.forms import TopicsForm
from lda.helpers import reports_command_errors, validate_options
from lda.model import load_model


class Command(BaseCommand):
    """Print the most probable words of every topic of a saved model."""

    help = 'Prints the topic report of a model as JSON'

    def add_arguments(self, parser):
        parser.add_argument('--model', required=True, help='model JSON written by train')
        parser.add_argument('--n', type=int, default=settings.LDA_TOPIC_WORDS, help='words per topic')

    @reports_command_errors
    def handle(self, *args, **options):
        params = validate_options(TopicsForm, options)
        model = load_model(params['model'])
        self.stdout.write(report_to_json(topic_report(model.state, model.vocab, params['n'])))
