"""The message-passing schedule, epoch by epoch, and its termination rule.

One epoch follows the fixed schedule for LDA:

    for each document m:
        for each word n:   phi_k -> W_mn, observe W_mn, W_mn -> Z_mn, Z_mn -> theta_m
        for each word n:   theta_m -> Z_mn, Z_mn -> W_mn
    for each word n in each document m:   W_mn -> phi_k

Within a document every Z node sees the theta message left by the previous
epoch's second loop, so the per-word Z -> theta sends commute into a single
``update_alpha``. Documents only read epoch-start snapshots, which lets them
run on worker threads; the phi update waits for all of them and then
accumulates contributions in document order.
"""

import logging
import math
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from django.core.exceptions import ValidationError
from joblib import Parallel, delayed

from lda.exceptions import OutOfVocabularyError
from lda.messages import (
    compute_responsibility,
    msg_phi_to_w,
    msg_theta_to_z,
    msg_w_to_phi,
    msg_w_to_z,
    msg_z_to_w,
    update_alpha,
    update_beta,
)
from lda.model import (
    Corpus,
    Document,
    Hyperparameters,
    VariationalState,
    init_state,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitOptions:
    """Termination and execution settings of a fit."""

    max_epochs: int = 100
    tol: float = 1e-4
    seed: int = 0
    parallel_documents: bool = False
    n_jobs: int = 1
    check_invariants: bool = False

    def __post_init__(self):
        self.clean()

    def clean(self):
        """Validate the options."""
        if not isinstance(self.max_epochs, int) or self.max_epochs < 1:
            raise ValidationError('max_epochs must be an integer of at least 1.')
        if math.isnan(self.tol) or self.tol <= 0:
            raise ValidationError('tol must be positive.')
        if self.n_jobs < 1:
            raise ValidationError('n_jobs must be at least 1.')

    @property
    def uses_threads(self):
        return self.parallel_documents and self.n_jobs > 1


@dataclass
class FitDiagnostics:
    """Per-epoch record of a fit."""

    epochs_run: int = 0
    deltas: list[float] = field(default_factory=list)
    converged: bool = False


def parameter_delta(before: VariationalState, after: VariationalState) -> float:
    """L-infinity change over doc_topic and topic_word together."""
    return float(max(
        np.max(np.abs(after.doc_topic - before.doc_topic)),
        np.max(np.abs(after.topic_word - before.topic_word)),
    ))


def _document_pass(expected_log_phi, theta_msg, tokens, alpha_prior):
    # First word loop: phi_k -> W, observe W, W -> Z, Z -> theta.
    w_msg = msg_w_to_z(expected_log_phi, tokens)
    responsibilities = compute_responsibility(theta_msg, w_msg)
    alpha = update_alpha(alpha_prior, responsibilities)
    # Second word loop: theta -> Z, then Z -> W.
    return responsibilities, alpha, msg_theta_to_z(alpha), msg_z_to_w(alpha)


def _document_results(state, corpus, hyper, expected_log_phi, parallel):
    jobs = (
        (expected_log_phi, state.theta_messages[m], doc.tokens, hyper.alpha_prior)
        for m, doc in enumerate(corpus.documents)
    )
    if parallel is None:
        return [_document_pass(*job) for job in jobs]
    return parallel(delayed(_document_pass)(*job) for job in jobs)


def run_epoch(state: VariationalState, corpus: Corpus, hyper: Hyperparameters,
              opts: Optional[FitOptions] = None, parallel: Optional[Parallel] = None) -> VariationalState:
    """Run one epoch of the schedule and return the new state.

    ``state`` is not modified. The result does not depend on whether the
    documents ran on threads.
    """
    state.check_dimensions(corpus, hyper)
    if parallel is None and opts is not None and opts.uses_threads:
        with Parallel(n_jobs=opts.n_jobs, backend='threading') as pool:
            return run_epoch(state, corpus, hyper, opts, pool)

    expected_log_phi = msg_phi_to_w(state.topic_word)
    results = _document_results(state, corpus, hyper, expected_log_phi, parallel)
    responsibilities, alphas, theta_messages, proportions = zip(*results)

    # Barrier passed: W -> phi for every token, in document order.
    contributions = (
        msg_w_to_phi(resp, doc.tokens, corpus.vocab_size)
        for doc, resp in zip(corpus.documents, responsibilities)
    )
    topic_word = update_beta(hyper.beta_prior, contributions, hyper.num_topics)

    return VariationalState(
        doc_topic=np.vstack(alphas),
        topic_word=topic_word,
        responsibilities=responsibilities,
        theta_messages=np.vstack(theta_messages),
        topic_proportions=np.vstack(proportions),
    )


def fit(corpus: Corpus, hyper: Hyperparameters, opts: FitOptions,
        callback: Optional[Callable[[int, float], None]] = None,
        initial_state: Optional[VariationalState] = None):
    """Initialize, then run epochs until the parameters settle or the budget runs out.

    Returns ``(state, diagnostics)``. ``callback(epoch, delta)`` is called
    after every epoch, epochs counting from 1.
    """
    state = initial_state if initial_state is not None else init_state(corpus, hyper, opts.seed)
    diagnostics = FitDiagnostics()
    logger.info(
        'fitting %d topics to %d documents over %d terms (max %d epochs, tol %g)',
        hyper.num_topics, corpus.num_documents, corpus.vocab_size, opts.max_epochs, opts.tol,
    )

    workers = Parallel(n_jobs=opts.n_jobs, backend='threading') if opts.uses_threads else nullcontext()
    with workers as pool:
        for epoch in range(1, opts.max_epochs + 1):
            new_state = run_epoch(state, corpus, hyper, opts, pool)
            if opts.check_invariants:
                new_state.check_invariants(corpus, hyper)
            delta = parameter_delta(state, new_state)
            state = new_state
            diagnostics.epochs_run = epoch
            diagnostics.deltas.append(delta)
            logger.debug('epoch %d delta %g', epoch, delta)
            if callback is not None:
                callback(epoch, delta)
            if delta < opts.tol:
                diagnostics.converged = True
                break

    if diagnostics.converged:
        logger.info('converged after %d epochs', diagnostics.epochs_run)
    else:
        logger.info('stopped after %d epochs without reaching tol %g', diagnostics.epochs_run, opts.tol)
    return state, diagnostics


def infer_document(state: VariationalState, doc: Document, hyper: Hyperparameters,
                   opts: FitOptions) -> np.ndarray:
    """Fold a new document into a trained model and return its alpha.

    Topic-word parameters stay fixed; only the document's own loops of the
    schedule run, until alpha moves by less than ``opts.tol``.
    """
    tokens = doc.tokens
    outside = tokens[tokens >= state.vocab_size]
    if outside.size:
        raise OutOfVocabularyError(outside, state.vocab_size)

    w_msg = msg_w_to_z(msg_phi_to_w(state.topic_word), tokens)
    alpha = hyper.alpha_prior.copy()
    theta_msg = msg_theta_to_z(alpha)
    for iteration in range(1, opts.max_epochs + 1):
        new_alpha = update_alpha(hyper.alpha_prior, compute_responsibility(theta_msg, w_msg))
        delta = float(np.max(np.abs(new_alpha - alpha)))
        alpha = new_alpha
        theta_msg = msg_theta_to_z(alpha)
        if delta < opts.tol:
            logger.debug('fold-in settled after %d iterations', iteration)
            break
    return alpha
