"""Corpus, priors and variational state of the smoothed LDA model."""

import json
import logging
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from django.core.exceptions import ValidationError

from lda.ef_core import (
    NORMALIZATION_TOL,
    dirichlet_expected_log,
    is_prob_vector,
    log_normalize,
)
from lda.exceptions import ContractError

logger = logging.getLogger(__name__)

# Topic-word rows start at the prior plus U[0, PERTURBATION_SCALE * mean(beta_prior)].
PERTURBATION_SCALE = 0.1

DOC_CONSERVATION_TOL = 1e-9
CORPUS_CONSERVATION_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Vocabulary:
    """Ordered, unique terms; a term's position is its word id."""

    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(self.terms))
        object.__setattr__(self, 'index', {term: i for i, term in enumerate(self.terms)})
        self.clean()

    @classmethod
    def from_terms(cls, terms):
        return cls(tuple(terms))

    def clean(self):
        """Validate the vocabulary."""
        if not self.terms:
            raise ValidationError('A vocabulary needs at least one term.')
        if len(self.index) != len(self.terms):
            raise ValidationError('Vocabulary terms must be unique.')

    def id_of(self, term):
        """Return the id of ``term``, or None when it is not in the vocabulary."""
        return self.index.get(term)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)


@dataclass(frozen=True, eq=False)
class Document:
    """One document: its word ids in reading order, duplicates kept."""

    tokens: npt.NDArray[np.int64]

    def __post_init__(self):
        object.__setattr__(self, 'tokens', np.array(self.tokens, dtype=np.int64))
        self.tokens.setflags(write=False)
        self.clean()

    def clean(self):
        """Validate the document."""
        if self.tokens.ndim != 1:
            raise ValidationError('Document tokens must be a flat sequence of ids.')
        if self.tokens.size == 0:
            raise ValidationError('A document needs at least one token.')
        if np.any(self.tokens < 0):
            raise ValidationError('Word ids cannot be negative.')

    def __len__(self):
        return int(self.tokens.size)

    def __eq__(self, other):
        return isinstance(other, Document) and np.array_equal(self.tokens, other.tokens)

    def __hash__(self):
        return hash(self.tokens.tobytes())


@dataclass(frozen=True, eq=False)
class Corpus:
    """Documents over a shared vocabulary."""

    documents: tuple[Document, ...]
    vocab: Vocabulary

    def __post_init__(self):
        object.__setattr__(self, 'documents', tuple(self.documents))
        self.clean()

    def clean(self):
        """Validate the corpus against its vocabulary."""
        if not self.documents:
            raise ValidationError('A corpus needs at least one document.')
        largest = max(int(doc.tokens.max()) for doc in self.documents)
        if largest >= len(self.vocab):
            raise ValidationError(
                f'Word id {largest} is outside the vocabulary of size {len(self.vocab)}.'
            )

    @property
    def num_documents(self):
        return len(self.documents)

    @property
    def vocab_size(self):
        return len(self.vocab)

    def lengths(self):
        return np.array([len(doc) for doc in self.documents], dtype=np.int64)

    def __len__(self):
        return self.num_documents

    def __eq__(self, other):
        return (
            isinstance(other, Corpus)
            and self.vocab == other.vocab
            and self.documents == other.documents
        )

    def __hash__(self):
        return hash((self.vocab, self.documents))


def total_tokens(corpus):
    """Number of word occurrences in the whole corpus."""
    return int(sum(len(doc) for doc in corpus.documents))


@dataclass(frozen=True, eq=False)
class Hyperparameters:
    """Shared Dirichlet priors: one over topics, one over words."""

    alpha_prior: npt.NDArray[np.float64]
    beta_prior: npt.NDArray[np.float64]

    def __post_init__(self):
        object.__setattr__(self, 'alpha_prior', np.asarray(self.alpha_prior, dtype=np.float64))
        object.__setattr__(self, 'beta_prior', np.asarray(self.beta_prior, dtype=np.float64))
        self.clean()

    @classmethod
    def symmetric(cls, num_topics, vocab_size, alpha, beta):
        """Constant priors ``alpha`` over ``num_topics`` and ``beta`` over ``vocab_size``."""
        return cls(np.full(num_topics, float(alpha)), np.full(vocab_size, float(beta)))

    def clean(self):
        """Validate the priors."""
        if self.alpha_prior.ndim != 1 or self.beta_prior.ndim != 1:
            raise ValidationError('Priors must be vectors.')
        if self.alpha_prior.size < 2:
            raise ValidationError('At least two topics are needed.')
        if self.beta_prior.size < 1:
            raise ValidationError('The word prior needs at least one entry.')
        for name, prior in (('alpha', self.alpha_prior), ('beta', self.beta_prior)):
            if not np.all(np.isfinite(prior)) or np.any(prior <= 0):
                raise ValidationError(f'Every {name} pseudocount must be finite and positive.')

    @property
    def num_topics(self):
        return int(self.alpha_prior.size)

    @property
    def vocab_size(self):
        return int(self.beta_prior.size)

    def is_symmetric_beta(self):
        return bool(np.all(self.beta_prior == self.beta_prior[0]))


@dataclass(eq=False)
class VariationalState:
    """Dirichlet parameters of every theta_m and phi_k, plus per-token responsibilities.

    ``theta_messages`` holds each document's latest theta -> Z log message and
    ``topic_proportions`` the matching normalized Z -> W message; both are
    functions of ``doc_topic`` and are refreshed whenever it changes.
    """

    doc_topic: npt.NDArray[np.float64]
    topic_word: npt.NDArray[np.float64]
    responsibilities: tuple = ()
    theta_messages: npt.NDArray[np.float64] | None = None
    topic_proportions: npt.NDArray[np.float64] | None = None

    def __post_init__(self):
        self.doc_topic = np.asarray(self.doc_topic, dtype=np.float64)
        self.topic_word = np.asarray(self.topic_word, dtype=np.float64)
        self.responsibilities = tuple(self.responsibilities)
        if self.theta_messages is None:
            self.theta_messages = dirichlet_expected_log(self.doc_topic)
        if self.topic_proportions is None:
            self.topic_proportions = log_normalize(self.theta_messages)

    @property
    def num_topics(self):
        return int(self.topic_word.shape[0])

    @property
    def vocab_size(self):
        return int(self.topic_word.shape[1])

    @property
    def num_documents(self):
        return int(self.doc_topic.shape[0])

    def copy(self):
        return VariationalState(
            doc_topic=self.doc_topic.copy(),
            topic_word=self.topic_word.copy(),
            responsibilities=tuple(r.copy() for r in self.responsibilities),
            theta_messages=self.theta_messages.copy(),
            topic_proportions=self.topic_proportions.copy(),
        )

    def mean_doc_topic(self):
        """Posterior mean topic proportions, one row per document."""
        return self.doc_topic / self.doc_topic.sum(axis=1, keepdims=True)

    def mean_topic_word(self):
        """Posterior mean word distributions, one row per topic."""
        return self.topic_word / self.topic_word.sum(axis=1, keepdims=True)

    def check_dimensions(self, corpus, hyper):
        """Raise ContractError unless the state fits ``corpus`` and ``hyper``."""
        expected_doc = (corpus.num_documents, hyper.num_topics)
        expected_word = (hyper.num_topics, corpus.vocab_size)
        if self.doc_topic.shape != expected_doc:
            raise ContractError(f'doc_topic is {self.doc_topic.shape}, expected {expected_doc}')
        if self.topic_word.shape != expected_word:
            raise ContractError(f'topic_word is {self.topic_word.shape}, expected {expected_word}')
        if hyper.vocab_size != corpus.vocab_size:
            raise ContractError(
                f'beta prior has {hyper.vocab_size} entries for a vocabulary of {corpus.vocab_size}'
            )
        if self.theta_messages.shape != expected_doc or self.topic_proportions.shape != expected_doc:
            raise ContractError('per-document messages do not match doc_topic')
        if self.responsibilities:
            if len(self.responsibilities) != corpus.num_documents:
                raise ContractError('one responsibility block per document is required')
            for doc, resp in zip(corpus.documents, self.responsibilities):
                if resp.shape != (len(doc), hyper.num_topics):
                    raise ContractError(
                        f'responsibilities are {resp.shape}, expected {(len(doc), hyper.num_topics)}'
                    )

    def check_invariants(self, corpus, hyper):
        """Raise ContractError when positivity, normalization or conservation fails."""
        self.check_dimensions(corpus, hyper)
        if np.any(self.doc_topic <= 0) or np.any(self.topic_word <= 0):
            raise ContractError('Dirichlet parameters must stay positive')
        for resp in self.responsibilities:
            if not is_prob_vector(resp, NORMALIZATION_TOL):
                raise ContractError('a responsibility vector is not normalized')
        added = (self.doc_topic - hyper.alpha_prior).sum(axis=1)
        drift = np.abs(added - corpus.lengths())
        if np.any(drift > DOC_CONSERVATION_TOL):
            raise ContractError(f'document pseudocounts drifted by up to {drift.max():.3g}')
        word_added = float((self.topic_word - hyper.beta_prior).sum())
        word_drift = abs(word_added - total_tokens(corpus))
        if word_drift > CORPUS_CONSERVATION_TOL:
            raise ContractError(f'topic-word pseudocounts drifted by {word_drift:.3g}')


def init_state(corpus: Corpus, hyper: Hyperparameters, seed: int,
               perturbation: float = PERTURBATION_SCALE) -> VariationalState:
    """Initialize every factor: theta rows at the prior, phi rows jittered, uniform responsibilities.

    Only the topic-word side is perturbed, which is enough to break the
    symmetry between topics on the first epoch.
    """
    if hyper.vocab_size != corpus.vocab_size:
        raise ContractError(
            f'beta prior has {hyper.vocab_size} entries for a vocabulary of {corpus.vocab_size}'
        )
    rng = np.random.default_rng(seed)
    num_topics = hyper.num_topics
    amplitude = perturbation * float(np.mean(hyper.beta_prior))
    jitter = rng.uniform(0.0, amplitude, size=(num_topics, corpus.vocab_size))

    doc_topic = np.tile(hyper.alpha_prior, (corpus.num_documents, 1))
    topic_word = hyper.beta_prior[np.newaxis, :] + jitter
    responsibilities = tuple(
        np.full((len(doc), num_topics), 1.0 / num_topics) for doc in corpus.documents
    )
    return VariationalState(doc_topic, topic_word, responsibilities)


@dataclass(eq=False)
class TopicModel:
    """What a training run produces and the commands persist."""

    vocab: Vocabulary
    hyper: Hyperparameters
    state: VariationalState


def _floats(array):
    return np.asarray(array, dtype=np.float64).tolist()


def dumps_model(model):
    """Serialize a model to its JSON document.

    Floats use Python's shortest round-trip form, so a reload reproduces
    every parameter bit for bit. Responsibilities are not written.
    """
    beta = model.hyper.beta_prior
    document = {
        'K': model.hyper.num_topics,
        'V': len(model.vocab),
        'vocab': list(model.vocab.terms),
        'alpha_prior': _floats(model.hyper.alpha_prior),
        'beta_prior_scalar_or_vector': float(beta[0]) if model.hyper.is_symmetric_beta() else _floats(beta),
        'doc_topic': _floats(model.state.doc_topic),
        'topic_word': _floats(model.state.topic_word),
    }
    return json.dumps(document) + '\n'


def save_model(model, path):
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(dumps_model(model))
    logger.info('saved a %d-topic model to %s', model.hyper.num_topics, path)


def _positive(array):
    return bool(np.all(np.isfinite(array)) and np.all(array > 0))


def loads_model(text):
    """Rebuild a model from its JSON document.

    Anything that does not describe a consistent model raises ContractError.
    """
    try:
        document = json.loads(text)
    except ValueError as error:
        raise ContractError(f'model file is not valid JSON: {error}') from error
    if not isinstance(document, dict):
        raise ContractError('model file must hold a JSON object')
    missing = {'K', 'V', 'vocab', 'alpha_prior', 'beta_prior_scalar_or_vector',
               'doc_topic', 'topic_word'} - set(document)
    if missing:
        raise ContractError(f'model file lacks fields {sorted(missing)}')
    terms = document['vocab']
    if not isinstance(terms, list) or not all(isinstance(term, str) for term in terms):
        raise ContractError('model vocabulary must be a list of strings')

    try:
        num_topics, vocab_size = int(document['K']), int(document['V'])
        beta = document['beta_prior_scalar_or_vector']
        if np.isscalar(beta):
            beta_prior = np.full(vocab_size, float(beta))
        else:
            beta_prior = np.asarray(beta, dtype=np.float64)
        alpha_prior = np.asarray(document['alpha_prior'], dtype=np.float64)
        doc_topic = np.asarray(document['doc_topic'], dtype=np.float64).reshape(-1, num_topics)
        topic_word = np.asarray(document['topic_word'], dtype=np.float64)
    except (TypeError, ValueError) as error:
        raise ContractError(f'model file holds malformed parameters: {error}') from error
    try:
        vocab = Vocabulary.from_terms(terms)
        hyper = Hyperparameters(alpha_prior, beta_prior)
    except ValidationError as error:
        raise ContractError(f'model file is inconsistent: {"; ".join(error.messages)}') from error

    if (len(vocab) != vocab_size or hyper.num_topics != num_topics
            or hyper.vocab_size != vocab_size or topic_word.shape != (num_topics, vocab_size)
            or doc_topic.shape[0] == 0):
        raise ContractError('model file dimensions disagree with K and V')
    if not _positive(doc_topic) or not _positive(topic_word):
        raise ContractError('model file holds non-positive Dirichlet parameters')
    return TopicModel(vocab, hyper, VariationalState(doc_topic, topic_word))


def load_model(path) -> TopicModel:
    with open(path, encoding='utf-8') as handle:
        return loads_model(handle.read())
