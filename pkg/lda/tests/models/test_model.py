"""Unit tests for the corpus, prior and state models."""
import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from lda.engine import run_epoch
from lda.exceptions import ContractError
from lda.model import (
    PERTURBATION_SCALE,
    Corpus,
    Document,
    Hyperparameters,
    VariationalState,
    Vocabulary,
    init_state,
    total_tokens,
)
from lda.tests.helpers import make_corpus


class VocabularyModelTestCase(SimpleTestCase):
    """Unit tests for the Vocabulary model."""

    def setUp(self):
        self.vocab = Vocabulary.from_terms(['apple', 'banana', 'cherry'])

    def test_position_is_word_id(self):
        """Test that a term's id is its position."""
        self.assertEqual(self.vocab.id_of('cherry'), 2)
        self.assertIsNone(self.vocab.id_of('durian'))
        self.assertEqual(len(self.vocab), 3)

    def test_terms_must_be_unique(self):
        """Test that duplicate terms are invalid."""
        self._assert_vocabulary_is_invalid(['apple', 'apple'])

    def test_vocabulary_cannot_be_empty(self):
        """Test that a vocabulary needs at least one term."""
        self._assert_vocabulary_is_invalid([])

    def test_equality_follows_terms(self):
        """Test that vocabularies with the same terms are equal."""
        self.assertEqual(self.vocab, Vocabulary(('apple', 'banana', 'cherry')))
        self.assertNotEqual(self.vocab, Vocabulary(('banana', 'apple', 'cherry')))

    def _assert_vocabulary_is_invalid(self, terms):
        with self.assertRaises(ValidationError):
            Vocabulary.from_terms(terms)


class DocumentModelTestCase(SimpleTestCase):
    """Unit tests for the Document model."""

    def test_tokens_keep_order_and_duplicates(self):
        """Test that the token sequence is stored as given."""
        doc = Document([3, 1, 3])
        np.testing.assert_array_equal(doc.tokens, [3, 1, 3])
        self.assertEqual(len(doc), 3)

    def test_tokens_are_read_only(self):
        """Test that a document cannot be modified in place."""
        doc = Document([0, 1])
        with self.assertRaises(ValueError):
            doc.tokens[0] = 5

    def test_document_cannot_be_empty(self):
        """Test that a document needs at least one token."""
        with self.assertRaises(ValidationError):
            Document([])

    def test_word_ids_cannot_be_negative(self):
        """Test that negative ids are invalid."""
        with self.assertRaises(ValidationError):
            Document([0, -1])


class CorpusModelTestCase(SimpleTestCase):
    """Unit tests for the Corpus model."""

    def setUp(self):
        self.corpus = make_corpus([[0, 1, 1], [2], [3, 0]], 4)

    def test_sizes(self):
        """Test the corpus dimensions and token count."""
        self.assertEqual(self.corpus.num_documents, 3)
        self.assertEqual(self.corpus.vocab_size, 4)
        np.testing.assert_array_equal(self.corpus.lengths(), [3, 1, 2])
        self.assertEqual(total_tokens(self.corpus), 6)

    def test_ids_must_fit_the_vocabulary(self):
        """Test that an id equal to V is invalid."""
        with self.assertRaises(ValidationError):
            make_corpus([[0, 4]], 4)

    def test_corpus_cannot_be_empty(self):
        """Test that a corpus needs at least one document."""
        with self.assertRaises(ValidationError):
            Corpus([], self.corpus.vocab)

    def test_equal_corpora(self):
        """Test that corpora with the same documents and vocabulary are equal."""
        self.assertEqual(self.corpus, make_corpus([[0, 1, 1], [2], [3, 0]], 4))
        self.assertNotEqual(self.corpus, make_corpus([[0, 1, 1], [2], [0, 3]], 4))


class HyperparametersModelTestCase(SimpleTestCase):
    """Unit tests for the Hyperparameters model."""

    def test_symmetric_priors(self):
        """Test that symmetric priors fill both vectors."""
        hyper = Hyperparameters.symmetric(3, 5, 0.5, 0.01)
        self.assertEqual(hyper.num_topics, 3)
        self.assertEqual(hyper.vocab_size, 5)
        self.assertTrue(hyper.is_symmetric_beta())

    def test_asymmetric_beta(self):
        """Test that a varying word prior is not symmetric."""
        hyper = Hyperparameters(np.ones(2), np.array([0.1, 0.2]))
        self.assertFalse(hyper.is_symmetric_beta())

    def test_one_topic_is_not_enough(self):
        """Test that K = 1 is invalid."""
        self._assert_hyperparameters_are_invalid(np.ones(1), np.ones(3))

    def test_priors_must_be_positive(self):
        """Test that zero pseudocounts are invalid."""
        self._assert_hyperparameters_are_invalid(np.array([1.0, 0.0]), np.ones(3))
        self._assert_hyperparameters_are_invalid(np.ones(2), np.array([0.1, -0.1]))

    def test_priors_must_be_finite(self):
        """Test that infinite pseudocounts are invalid."""
        self._assert_hyperparameters_are_invalid(np.array([1.0, np.inf]), np.ones(3))

    def test_priors_must_be_vectors(self):
        """Test that a matrix prior is invalid."""
        self._assert_hyperparameters_are_invalid(np.ones((2, 2)), np.ones(3))

    def _assert_hyperparameters_are_invalid(self, alpha, beta):
        with self.assertRaises(ValidationError):
            Hyperparameters(alpha, beta)


class InitStateTestCase(SimpleTestCase):
    """Unit tests for init_state."""

    def setUp(self):
        self.corpus = make_corpus([[0, 1, 2], [3, 3], [4, 0, 1, 2]], 5)
        self.hyper = Hyperparameters.symmetric(3, 5, 0.5, 0.2)
        self.state = init_state(self.corpus, self.hyper, seed=1)

    def test_doc_topic_starts_at_the_prior(self):
        """Test that every theta row equals alpha_prior."""
        np.testing.assert_array_equal(self.state.doc_topic, np.full((3, 3), 0.5))

    def test_topic_word_is_perturbed_within_bounds(self):
        """Test that phi rows lie in [beta, beta + scale * mean(beta)]."""
        self.assertTrue(np.all(self.state.topic_word >= 0.2))
        self.assertTrue(np.all(self.state.topic_word <= 0.2 * (1 + PERTURBATION_SCALE)))
        self.assertFalse(np.array_equal(self.state.topic_word[0], self.state.topic_word[1]))

    def test_responsibilities_start_uniform(self):
        """Test that every token starts with r = 1/K."""
        self.assertEqual([r.shape for r in self.state.responsibilities], [(3, 3), (2, 3), (4, 3)])
        for r in self.state.responsibilities:
            np.testing.assert_array_equal(r, np.full(r.shape, 1 / 3))

    def test_same_seed_gives_identical_states(self):
        """Test that init_state is deterministic."""
        again = init_state(self.corpus, self.hyper, seed=1)
        np.testing.assert_array_equal(again.topic_word, self.state.topic_word)
        np.testing.assert_array_equal(again.doc_topic, self.state.doc_topic)

    def test_other_seed_gives_other_jitter(self):
        """Test that the seed drives the perturbation."""
        other = init_state(self.corpus, self.hyper, seed=2)
        self.assertFalse(np.array_equal(other.topic_word, self.state.topic_word))

    def test_unperturbed_state_is_invariant_under_topic_permutation(self):
        """Test that without jitter relabelling the topics changes nothing."""
        state = init_state(self.corpus, self.hyper, seed=1, perturbation=0.0)
        order = np.array([2, 0, 1])
        np.testing.assert_array_equal(state.topic_word[order], state.topic_word)
        np.testing.assert_array_equal(state.doc_topic[:, order], state.doc_topic)
        for r in state.responsibilities:
            np.testing.assert_array_equal(r[:, order], r)

    def test_prior_must_fit_the_vocabulary(self):
        """Test that a beta prior of the wrong length raises ContractError."""
        with self.assertRaises(ContractError):
            init_state(self.corpus, Hyperparameters.symmetric(3, 6, 0.5, 0.2), seed=1)


class VariationalStateTestCase(SimpleTestCase):
    """Unit tests for the VariationalState model."""

    def setUp(self):
        self.corpus = make_corpus([[0, 1, 2], [3, 3], [4, 0, 1, 2]], 5)
        self.hyper = Hyperparameters.symmetric(2, 5, 0.5, 0.2)
        self.state = init_state(self.corpus, self.hyper, seed=3)

    def test_messages_follow_doc_topic(self):
        """Test that the stored theta messages are normalized into topic proportions."""
        self.assertEqual(self.state.theta_messages.shape, (3, 2))
        np.testing.assert_allclose(self.state.topic_proportions, np.full((3, 2), 0.5))

    def test_posterior_means_are_normalized(self):
        """Test that mean rows sum to one."""
        np.testing.assert_allclose(self.state.mean_topic_word().sum(axis=1), np.ones(2))
        np.testing.assert_allclose(self.state.mean_doc_topic().sum(axis=1), np.ones(3))

    def test_copy_is_independent(self):
        """Test that modifying a copy leaves the original alone."""
        clone = self.state.copy()
        clone.topic_word[0, 0] = 99.0
        clone.responsibilities[0][0, 0] = 0.0
        self.assertNotEqual(self.state.topic_word[0, 0], 99.0)
        self.assertEqual(self.state.responsibilities[0][0, 0], 0.5)

    def test_check_dimensions_accepts_a_matching_state(self):
        """Test that a state built for the corpus passes the dimension check."""
        self.state.check_dimensions(self.corpus, self.hyper)

    def test_check_dimensions_rejects_other_topic_counts(self):
        """Test that a state for another K raises ContractError."""
        with self.assertRaises(ContractError):
            self.state.check_dimensions(self.corpus, Hyperparameters.symmetric(3, 5, 0.5, 0.2))

    def test_check_dimensions_rejects_missing_documents(self):
        """Test that responsibilities must cover every document."""
        broken = VariationalState(
            self.state.doc_topic, self.state.topic_word, self.state.responsibilities[:2],
        )
        with self.assertRaises(ContractError):
            broken.check_dimensions(self.corpus, self.hyper)

    def test_invariants_hold_after_an_epoch(self):
        """Test that positivity, normalization and conservation hold after run_epoch."""
        run_epoch(self.state, self.corpus, self.hyper).check_invariants(self.corpus, self.hyper)

    def test_invariants_detect_lost_mass(self):
        """Test that a state whose pseudocounts do not match the corpus is rejected."""
        state = run_epoch(self.state, self.corpus, self.hyper)
        state.doc_topic[0, 0] += 0.5
        with self.assertRaises(ContractError):
            state.check_invariants(self.corpus, self.hyper)

    def test_invariants_detect_non_positive_parameters(self):
        """Test that a zero pseudocount is rejected."""
        state = run_epoch(self.state, self.corpus, self.hyper)
        state.topic_word[1, 2] = 0.0
        with self.assertRaises(ContractError):
            state.check_invariants(self.corpus, self.hyper)
