"""Evaluation instruments: a dense reference epoch, synthetic corpora, topic matching and reports."""

import json
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, psi

from lda.exceptions import ContractError
from lda.model import Corpus, Document, Hyperparameters, VariationalState, Vocabulary

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class SyntheticTruth:
    """A corpus sampled from the LDA generative process, with the parameters used."""

    true_topic_word: np.ndarray
    true_doc_topic: np.ndarray
    corpus: Corpus


@dataclass(frozen=True)
class TopicWord:
    term: str
    p: float


@dataclass(frozen=True)
class TopicRow:
    """One topic's highest-probability terms."""

    topic: int
    words: tuple[TopicWord, ...]

    def as_dict(self):
        return {'topic': self.topic, 'words': [{'term': w.term, 'p': w.p} for w in self.words]}


def vb_oracle_epoch(state: VariationalState, corpus: Corpus, hyper: Hyperparameters) -> VariationalState:
    """One coordinate-ascent sweep written with dense matrices.

    Uses the same snapshot semantics as ``engine.run_epoch`` (every token of
    a document sees the epoch-start theta, phi is updated after all
    documents) but shares none of its code, so the two can check each other.
    """
    num_docs, num_topics = state.doc_topic.shape
    vocab_size = state.topic_word.shape[1]
    if (num_docs != corpus.num_documents or vocab_size != corpus.vocab_size
            or num_topics != hyper.num_topics or state.topic_word.shape[0] != num_topics
            or hyper.vocab_size != vocab_size):
        raise ContractError('state, corpus and hyperparameters disagree on dimensions')

    elog_theta = psi(state.doc_topic) - psi(state.doc_topic.sum(axis=1, keepdims=True))
    elog_phi = psi(state.topic_word) - psi(state.topic_word.sum(axis=1, keepdims=True))

    doc_topic = np.empty_like(state.doc_topic)
    word_mass = np.zeros((num_topics, vocab_size))
    responsibilities = []
    for m, doc in enumerate(corpus.documents):
        indicator = np.zeros((len(doc), vocab_size))
        indicator[np.arange(len(doc)), doc.tokens] = 1.0
        log_r = elog_theta[m] + indicator @ elog_phi.T
        r = np.exp(log_r - logsumexp(log_r, axis=1, keepdims=True))
        responsibilities.append(r)
        doc_topic[m] = hyper.alpha_prior + r.sum(axis=0)
        word_mass += r.T @ indicator

    return VariationalState(
        doc_topic=doc_topic,
        topic_word=hyper.beta_prior + word_mass,
        responsibilities=responsibilities,
        theta_messages=psi(doc_topic) - psi(doc_topic.sum(axis=1, keepdims=True)),
    )


def _default_terms(vocab_size):
    width = max(4, len(str(vocab_size - 1)))
    return [f'w{v:0{width}d}' for v in range(vocab_size)]


def generate_synthetic(num_topics, vocab_size, num_documents, doc_length,
                       alpha_prior, beta_prior, seed, terms=None) -> SyntheticTruth:
    """Sample phi_k ~ Dir(beta), theta_m ~ Dir(alpha), then Z ~ Cat(theta_m) and W ~ Cat(phi_Z).

    ``alpha_prior`` is a scalar or a length-K vector; ``beta_prior`` a
    scalar, a length-V vector or a K x V matrix of per-topic priors.
    """
    if num_topics < 2 or vocab_size < num_topics:
        raise ContractError('need at least two topics and no more topics than terms')
    if num_documents < 1 or doc_length < 1:
        raise ContractError('need at least one document of at least one token')
    alpha = np.broadcast_to(np.asarray(alpha_prior, dtype=np.float64), (num_topics,))
    beta = np.broadcast_to(np.asarray(beta_prior, dtype=np.float64), (num_topics, vocab_size))
    if np.any(alpha <= 0) or np.any(beta <= 0):
        raise ContractError('priors must be positive')

    rng = np.random.default_rng(seed)
    topic_word = np.vstack([rng.dirichlet(beta[k]) for k in range(num_topics)])
    topic_word /= topic_word.sum(axis=1, keepdims=True)
    doc_topic = rng.dirichlet(alpha, size=num_documents)
    doc_topic /= doc_topic.sum(axis=1, keepdims=True)

    cumulative = np.cumsum(topic_word, axis=1)
    documents = []
    for m in range(num_documents):
        topics = rng.choice(num_topics, size=doc_length, p=doc_topic[m])
        draws = rng.random(doc_length)
        words = np.sum(draws[:, np.newaxis] >= cumulative[topics], axis=1)
        documents.append(Document(np.minimum(words, vocab_size - 1)))

    vocab = Vocabulary.from_terms(terms if terms is not None else _default_terms(vocab_size))
    logger.debug('sampled %d documents of %d tokens from %d topics', num_documents, doc_length, num_topics)
    return SyntheticTruth(topic_word, doc_topic, Corpus(documents, vocab))


def match_topics(estimated, truth):
    """Pair estimated topics with true ones by greedy cosine similarity.

    Returns ``(permutation, mean_cosine)`` where ``permutation[k]`` is the
    estimated row matched to true topic k. Each pick takes the best
    remaining pair; ties go to the lower true index, then the lower
    estimated index.
    """
    estimated = np.asarray(estimated, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if estimated.shape != truth.shape or estimated.ndim != 2:
        raise ContractError(f'cannot match {estimated.shape} topics against {truth.shape}')

    cosine = truth @ estimated.T
    cosine /= np.outer(np.linalg.norm(truth, axis=1), np.linalg.norm(estimated, axis=1))
    cosine = np.clip(cosine, 0.0, 1.0)

    num_topics = truth.shape[0]
    permutation = np.empty(num_topics, dtype=np.int64)
    scores = np.empty(num_topics)
    remaining = cosine.copy()
    for _ in range(num_topics):
        true_k, est_k = np.unravel_index(np.argmax(remaining), remaining.shape)
        permutation[true_k] = est_k
        scores[true_k] = cosine[true_k, est_k]
        remaining[true_k, :] = -np.inf
        remaining[:, est_k] = -np.inf
    return permutation, float(scores.mean())


def top_words(state: VariationalState, vocab: Vocabulary, topic: int, n: int) -> TopicRow:
    """The ``n`` most probable terms of ``topic`` under the posterior mean, ties by word id."""
    if not 0 <= topic < state.num_topics:
        raise ContractError(f'topic {topic} is outside 0..{state.num_topics - 1}')
    if n < 1:
        raise ContractError('n must be at least 1')
    row = state.topic_word[topic]
    probabilities = row / row.sum()
    order = np.argsort(-probabilities, kind='stable')[:n]
    return TopicRow(
        topic=topic,
        words=tuple(TopicWord(vocab.terms[v], float(probabilities[v])) for v in order),
    )


def topic_report(state, vocab, n):
    return [top_words(state, vocab, k, n) for k in range(state.num_topics)]


def report_to_json(rows):
    return json.dumps([row.as_dict() for row in rows], indent=2)


def separable_beta(num_topics, vocab_size, on_support=100.0, off_support=0.01):
    """Per-topic priors concentrated on disjoint, contiguous blocks of the vocabulary."""
    owner = np.arange(vocab_size) * num_topics // vocab_size
    beta = np.full((num_topics, vocab_size), off_support)
    beta[owner, np.arange(vocab_size)] = on_support
    return beta
