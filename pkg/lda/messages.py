"""Variational messages of the smoothed LDA graph and the two conjugate updates.

The graph per word occurrence is theta_m -> Z_mn -> W_mn <- phi_k. Each
function below computes one message or one natural-parameter update; none
of them touches state. Functions taking word ids accept either one id or an
array of ids, in which case per-token inputs and outputs gain a leading
token axis (N x K).
"""

from dataclasses import dataclass

import numpy as np

from lda.ef_core import (
    DirichletParams,
    LogProbVector,
    ProbVector,
    as_dirichlet_params,
    dirichlet_expected_log,
    log_normalize,
    logsumexp,
)
from lda.exceptions import ContractError, OutOfVocabularyError


@dataclass(frozen=True)
class WordTopicContribution:
    """What one W node (or one document's W nodes) sends to the phi side.

    Sparse form of a K x V matrix that is zero outside the observed
    columns; column ``observed`` holds ``weights``.
    """

    observed: np.ndarray | int
    weights: np.ndarray


def _check_ids(observed, vocab_size):
    ids = np.asarray(observed, dtype=np.int64)
    bad = ids[(ids < 0) | (ids >= vocab_size)]
    if bad.size:
        raise OutOfVocabularyError(bad.ravel(), vocab_size)
    return ids


def msg_theta_to_z(alpha_m) -> LogProbVector:
    """theta_m -> Z_mn: the expected log topic proportions psi(a_k) - psi(sum a)."""
    return dirichlet_expected_log(alpha_m)


def msg_phi_to_w(beta_k) -> LogProbVector:
    """phi_k -> W_mn: the expected log word distribution of topic k.

    Passing the whole K x V topic-word matrix yields all K messages at once.
    """
    return dirichlet_expected_log(beta_k)


def msg_w_to_z(expected_log_phi, observed) -> LogProbVector:
    """W_mn -> Z_mn after observing word ``observed``.

    Slices every topic's expected log distribution at the observed word and
    normalizes the slice over topics. The result stays in the log domain.
    """
    expected_log_phi = np.asarray(expected_log_phi, dtype=np.float64)
    if expected_log_phi.ndim != 2:
        raise ContractError('expected_log_phi must be a K x V matrix')
    ids = _check_ids(observed, expected_log_phi.shape[1])
    sliced = expected_log_phi[:, ids].T
    return sliced - np.expand_dims(logsumexp(sliced), -1)


def compute_responsibility(theta_msg, w_msg) -> ProbVector:
    """Natural parameters of Z_mn after both incoming messages, as probabilities.

    This is r_mn = normalize(exp(theta_msg + w_msg)).
    """
    theta_msg = np.asarray(theta_msg, dtype=np.float64)
    w_msg = np.asarray(w_msg, dtype=np.float64)
    if theta_msg.shape[-1] != w_msg.shape[-1]:
        raise ContractError(
            f'messages disagree on the topic count: {theta_msg.shape[-1]} vs {w_msg.shape[-1]}'
        )
    return log_normalize(theta_msg + w_msg)


def msg_z_to_theta(r) -> np.ndarray:
    """Z_mn -> theta_m: the expected indicator statistics, i.e. r itself."""
    return np.array(r, dtype=np.float64, copy=True)


def update_alpha(alpha_prior, doc_responsibilities) -> DirichletParams:
    """Conjugate update of theta_m: prior plus the summed Z -> theta messages."""
    alpha_prior = as_dirichlet_params(alpha_prior)
    responsibilities = np.asarray(doc_responsibilities, dtype=np.float64)
    if responsibilities.size == 0:
        return alpha_prior.copy()
    responsibilities = responsibilities.reshape(-1, responsibilities.shape[-1])
    if responsibilities.shape[1] != alpha_prior.size:
        raise ContractError(
            f'responsibilities have {responsibilities.shape[1]} topics, prior has {alpha_prior.size}'
        )
    return alpha_prior + msg_z_to_theta(responsibilities).sum(axis=0)


def msg_z_to_w(alpha_m_updated) -> ProbVector:
    """Z_mn -> W_mn: normalized topic proportions theta* from the updated theta_m."""
    return log_normalize(dirichlet_expected_log(alpha_m_updated))


def msg_w_to_phi(r, observed, vocab_size) -> WordTopicContribution:
    """W_mn -> phi_k for every k: r lands in the observed word's column only."""
    ids = _check_ids(observed, vocab_size)
    weights = np.asarray(r, dtype=np.float64)
    if ids.ndim == 0:
        return WordTopicContribution(int(ids), weights)
    return WordTopicContribution(ids, weights)


def update_beta(beta_prior, contributions, num_topics) -> np.ndarray:
    """Conjugate update of all phi_k: prior plus every W -> phi message.

    Contributions are accumulated in the order given, so a fixed order
    gives bitwise reproducible results.
    """
    beta_prior = as_dirichlet_params(beta_prior)
    counts = np.zeros((beta_prior.size, num_topics), dtype=np.float64)
    for contribution in contributions:
        weights = np.asarray(contribution.weights, dtype=np.float64)
        if weights.shape[-1] != num_topics:
            raise ContractError(f'a contribution carries {weights.shape[-1]} topics, expected {num_topics}')
        np.add.at(counts, contribution.observed, weights)
    return beta_prior[np.newaxis, :] + counts.T
