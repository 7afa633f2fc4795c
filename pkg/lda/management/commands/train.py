from django.conf import settings
from django.core.management.base import BaseCommand

from lda.engine import FitOptions, fit
from lda.forms import TrainForm
from lda.helpers import reports_command_errors, validate_options
from lda.ingest import prune_vocabulary, read_bow, read_plaintext
from lda.model import Hyperparameters, TopicModel, save_model


class Command(BaseCommand):
    """Train a topic model by variational message passing and save it as JSON."""

    help = 'Trains an LDA topic model on a corpus and writes the model file'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='corpus file')
        parser.add_argument('--format', choices=['text', 'bow'], default='text',
                            help='one document per line, or UCI bag of words')
        parser.add_argument('--vocab', help='vocabulary file (bag-of-words input only)')
        parser.add_argument('--topics', type=int, required=True, help='number of topics K (at least 2)')
        parser.add_argument('--alpha', type=float, default=settings.LDA_DEFAULT_ALPHA,
                            help='symmetric document-topic prior')
        parser.add_argument('--beta', type=float, default=settings.LDA_DEFAULT_BETA,
                            help='symmetric topic-word prior')
        parser.add_argument('--epochs', type=int, default=settings.LDA_DEFAULT_EPOCHS)
        parser.add_argument('--tol', type=float, default=settings.LDA_DEFAULT_TOL,
                            help='stop once no parameter moves by this much in an epoch')
        parser.add_argument('--seed', type=int, default=settings.LDA_DEFAULT_SEED)
        parser.add_argument('--min-count', type=int, default=settings.LDA_DEFAULT_MIN_COUNT,
                            help='drop terms seen fewer times than this')
        parser.add_argument('--threads', type=int, default=settings.LDA_DEFAULT_THREADS,
                            help='worker threads for the documents of an epoch')
        parser.add_argument('--model-out', required=True, help='where to write the model JSON')

    @reports_command_errors
    def handle(self, *args, **options):
        params = validate_options(TrainForm, options)
        corpus = self.read_corpus(params)
        hyper = Hyperparameters.symmetric(params['topics'], corpus.vocab_size, params['alpha'], params['beta'])
        fit_options = FitOptions(
            max_epochs=params['epochs'],
            tol=params['tol'],
            seed=params['seed'],
            parallel_documents=params['threads'] > 1,
            n_jobs=params['threads'],
        )
        state, diagnostics = fit(corpus, hyper, fit_options, callback=self.report_epoch)
        save_model(TopicModel(corpus.vocab, hyper, state), params['model_out'])
        status = 'converged' if diagnostics.converged else 'stopped'
        self.stderr.write(f'{status} after {diagnostics.epochs_run} epochs')

    def read_corpus(self, params):
        with open(params['input'], encoding='utf-8') as handle:
            if params['format'] == 'text':
                return read_plaintext(handle, params['min_count'])
            with open(params['vocab'], encoding='utf-8') as vocab_handle:
                corpus = read_bow(handle, vocab_handle)
        return prune_vocabulary(corpus, params['min_count'])

    def report_epoch(self, epoch, delta):
        self.stderr.write(f'epoch {epoch} delta {delta:.6g}')
