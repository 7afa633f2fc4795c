"""Exponential-family primitives shared by every message computation.

Vectors are numpy arrays. Every operation also accepts a stack of vectors,
in which case the last axis is the distribution axis; a whole document's
tokens then go through a single call.

Three vector kinds flow through the library:

* ``LogProbVector``: finite natural-log values (expected log probabilities,
  unnormalized log messages).
* ``ProbVector``: non-negative entries summing to one.
* ``DirichletParams``: strictly positive pseudocounts.
"""

import numpy as np
import numpy.typing as npt
from scipy.special import gammaln

from lda.exceptions import DegenerateInputError, DomainError

LogProbVector = npt.NDArray[np.float64]
ProbVector = npt.NDArray[np.float64]
DirichletParams = npt.NDArray[np.float64]

# Numeric contracts reused by every module.
NORMALIZATION_TOL = 1e-12
DIGAMMA_TOL = 1e-10

# Arguments are shifted above this value before the asymptotic series.
_ASYMPTOTIC_THRESHOLD = 6.0


def _as_float_array(values, name):
    array = np.asarray(values, dtype=np.float64)
    if array.size == 0:
        raise DomainError(f'{name} needs at least one entry')
    return array


def as_dirichlet_params(values) -> DirichletParams:
    """Return ``values`` as pseudocounts, rejecting non-positive entries."""
    params = _as_float_array(values, 'Dirichlet parameters')
    if not np.all(np.isfinite(params)) or np.any(params <= 0):
        raise DomainError('Dirichlet pseudocounts must be finite and > 0')
    return params


def is_prob_vector(values, tol=NORMALIZATION_TOL) -> bool:
    """True when every row of ``values`` is a distribution within ``tol``."""
    probs = np.asarray(values, dtype=np.float64)
    if probs.size == 0 or np.any(probs < 0) or np.any(probs > 1):
        return False
    return bool(np.all(np.abs(probs.sum(axis=-1) - 1.0) <= tol))


def digamma(x):
    """The digamma function, psi(x) = d/dx ln Gamma(x), for x > 0.

    Arguments below 6 are pushed up with psi(x) = psi(x + 1) - 1/x, then the
    asymptotic series in 1/x^2 is summed through the x^-14 term.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError('digamma is defined here for finite x > 0 only')

    shifted = np.array(x, dtype=np.float64, copy=True)
    result = np.zeros_like(shifted)
    small = shifted < _ASYMPTOTIC_THRESHOLD
    while np.any(small):
        result[small] -= 1.0 / shifted[small]
        shifted[small] += 1.0
        small = shifted < _ASYMPTOTIC_THRESHOLD

    inv = 1.0 / shifted
    inv2 = inv * inv
    series = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (
        1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))))
    result += np.log(shifted) - 0.5 * inv - series

    if result.ndim == 0:
        return float(result)
    return result


def _as_log_vector(values):
    v = _as_float_array(values, 'log vector')
    if np.any(np.isnan(v)) or np.any(v == np.inf):
        raise DomainError('log vectors may not hold NaN or +inf')
    return v


def logsumexp(v):
    """ln(sum(exp(v))) along the last axis, without overflow."""
    v = _as_log_vector(v)
    peak = np.max(v, axis=-1, keepdims=True)
    if np.any(np.isneginf(peak)):
        raise DegenerateInputError('every entry of a log vector is -inf')
    total = peak + np.log(np.sum(np.exp(v - peak), axis=-1, keepdims=True))
    total = np.squeeze(total, axis=-1)
    if total.ndim == 0:
        return float(total)
    return total


def log_normalize(v) -> ProbVector:
    """Turn log weights into probabilities: exp(v_i - logsumexp(v)).

    Adding a constant to every entry of ``v`` leaves the result unchanged.
    """
    v = _as_log_vector(v)
    peak = np.max(v, axis=-1, keepdims=True)
    if np.any(np.isneginf(peak)):
        raise DegenerateInputError('every entry of a log vector is -inf')
    weights = np.exp(v - peak)
    return weights / np.sum(weights, axis=-1, keepdims=True)


def dirichlet_expected_log(d) -> LogProbVector:
    """Expected sufficient statistics <ln theta_k> = psi(a_k) - psi(sum_j a_j)."""
    params = as_dirichlet_params(d)
    return digamma(params) - digamma(np.sum(params, axis=-1, keepdims=True))


def dirichlet_natural_params(d):
    """Natural parameters of a Dirichlet: pseudocounts minus one."""
    return as_dirichlet_params(d) - 1.0


def dirichlet_from_natural(eta) -> DirichletParams:
    """Pseudocounts from natural parameters; the inverse of the above."""
    return as_dirichlet_params(np.asarray(eta, dtype=np.float64) + 1.0)


def dirichlet_log_partition(d):
    """A(alpha) = sum_k ln Gamma(a_k) - ln Gamma(sum_k a_k)."""
    params = as_dirichlet_params(d)
    value = np.sum(gammaln(params), axis=-1) - gammaln(np.sum(params, axis=-1))
    if np.ndim(value) == 0:
        return float(value)
    return value


def categorical_log_partition(eta):
    """A(eta) = ln sum_k exp(eta_k) for a categorical in natural form."""
    return logsumexp(eta)


def categorical_expected_stats(eta) -> ProbVector:
    """Gradient of the categorical log-partition: <[Z = k]> for every k."""
    return log_normalize(eta)
