"""Exceptions raised by the lda library."""


class LdaError(Exception):
    """Base class for all errors raised by the lda app."""


class DomainError(LdaError, ValueError):
    """A numeric argument lies outside the domain of a function."""


class DegenerateInputError(LdaError, ValueError):
    """A log-domain vector carries no probability mass at all."""


class ContractError(LdaError, ValueError):
    """Inputs disagree on dimensions, or a state invariant is broken."""


class EmptyCorpusError(LdaError):
    """No document, or no vocabulary term, survived ingestion."""


class ParseError(LdaError):
    """A bag-of-words stream is malformed."""

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f'line {line_number}: {message}')


class OutOfVocabularyError(LdaError, IndexError):
    """A document refers to word ids the vocabulary does not have."""

    def __init__(self, ids, vocab_size):
        self.ids = sorted(set(int(i) for i in ids))
        self.vocab_size = vocab_size
        super().__init__(
            f'word ids {self.ids} are outside a vocabulary of size {vocab_size}'
        )
