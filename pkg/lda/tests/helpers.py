from pathlib import Path

import numpy as np

from lda.model import Corpus, Document, Hyperparameters, Vocabulary, total_tokens

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


def fixture_path(name):
    """Absolute path of a file in the test fixtures directory."""
    return FIXTURES / name


def make_corpus(token_lists, vocab_size):
    """Corpus over terms w0, w1, ... from lists of word ids."""
    vocab = Vocabulary.from_terms(f'w{v}' for v in range(vocab_size))
    return Corpus([Document(tokens) for tokens in token_lists], vocab)


def oracle_fixture():
    """Four random documents of at most ten tokens, K=3, V=8, alpha=0.5, beta=0.1, seed 7."""
    rng = np.random.default_rng(7)
    lengths = rng.integers(1, 11, size=4)
    corpus = make_corpus([rng.integers(0, 8, size=n) for n in lengths], 8)
    return corpus, Hyperparameters.symmetric(3, 8, 0.5, 0.1)


class ConservationAssertionsMixin:
    """Class to extend tests with pseudocount conservation checks."""

    def assert_pseudocounts_conserved(self, state, corpus, hyper):
        """Check that the mass added to every Dirichlet equals the tokens it explains."""

        added = (state.doc_topic - hyper.alpha_prior).sum(axis=1)
        for length, mass in zip(corpus.lengths(), added):
            self.assertAlmostEqual(mass, length, delta=1e-9)
        word_mass = float((state.topic_word - hyper.beta_prior).sum())
        self.assertAlmostEqual(word_mass, total_tokens(corpus), delta=1e-6)
