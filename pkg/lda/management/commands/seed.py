import json
from pathlib import Path

from django.core.management.base import BaseCommand
from faker import Faker

from lda.evaluation import generate_synthetic, separable_beta
from lda.forms import SeedForm
from lda.helpers import reports_command_errors, validate_options
from lda.ingest import write_bow, write_vocab


class Command(BaseCommand):
    """Build automation command to seed a synthetic corpus with known topics."""

    TOPIC_COUNT = 3
    VOCAB_SIZE = 30
    DOCUMENT_COUNT = 200
    DOCUMENT_LENGTH = 50
    ALPHA = 0.5
    BETA = 0.1
    SEED = 0
    help = 'Seeds a synthetic bag-of-words corpus, its vocabulary and its true topics'

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.faker = Faker('en_GB')

    def add_arguments(self, parser):
        parser.add_argument('--out-dir', required=True)
        parser.add_argument('--topics', type=int, default=self.TOPIC_COUNT)
        parser.add_argument('--vocab-size', type=int, default=self.VOCAB_SIZE)
        parser.add_argument('--documents', type=int, default=self.DOCUMENT_COUNT)
        parser.add_argument('--length', type=int, default=self.DOCUMENT_LENGTH)
        parser.add_argument('--alpha', type=float, default=self.ALPHA)
        parser.add_argument('--beta', type=float, default=self.BETA,
                            help='symmetric prior the true topics are drawn from')
        parser.add_argument('--seed', type=int, default=self.SEED)
        parser.add_argument('--separable', action='store_true',
                            help='give every true topic its own disjoint block of terms')

    @reports_command_errors
    def handle(self, *args, **options):
        params = validate_options(SeedForm, options)
        out_dir = Path(params['out_dir'])
        out_dir.mkdir(parents=True, exist_ok=True)

        if params['separable']:
            beta = separable_beta(params['topics'], params['vocab_size'])
        else:
            beta = params['beta']
        truth = generate_synthetic(
            params['topics'], params['vocab_size'], params['documents'], params['length'],
            params['alpha'], beta, params['seed'], terms=self.create_terms(params),
        )

        with open(out_dir / 'corpus.bow', 'w', encoding='utf-8') as handle:
            write_bow(truth.corpus, handle)
        with open(out_dir / 'vocab.txt', 'w', encoding='utf-8') as handle:
            write_vocab(truth.corpus.vocab, handle)
        with open(out_dir / 'truth.json', 'w', encoding='utf-8') as handle:
            json.dump({
                'topic_word': truth.true_topic_word.tolist(),
                'doc_topic': truth.true_doc_topic.tolist(),
            }, handle)
        self.stdout.write(f'Corpus seeding complete: {truth.corpus.num_documents} documents in {out_dir}')

    def create_terms(self, params):
        """Readable terms, made unique by their word id."""
        self.faker.seed_instance(params['seed'])
        return [f'{self.faker.word().lower()}{v}' for v in range(params['vocab_size'])]
