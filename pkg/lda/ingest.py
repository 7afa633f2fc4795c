"""Building corpora from plain text and from bag-of-words files.

The bag-of-words layout is the one used by the UCI repository::

    M
    V
    NNZ
    docId wordId count
    ...

with 1-based ids, plus a vocabulary file of V lines. Internally ids are
0-based.
"""

import logging
import re
from collections import Counter, defaultdict

import numpy as np
from django.core.exceptions import ValidationError

from lda.exceptions import ContractError, EmptyCorpusError, ParseError
from lda.model import Corpus, Document, Vocabulary

logger = logging.getLogger(__name__)

# Runs of letters and digits; underscores separate tokens like punctuation does.
_TOKEN_PATTERN = re.compile(r'[^\W_]+')
MIN_TOKEN_LENGTH = 2


def tokenize(line):
    """Lowercase, split on non-alphanumeric runs, drop tokens shorter than two characters."""
    return [token for token in _TOKEN_PATTERN.findall(line.lower()) if len(token) >= MIN_TOKEN_LENGTH]


def build_vocab(token_streams, min_count=1):
    """Vocabulary of the terms seen at least ``min_count`` times, in first-occurrence order."""
    if min_count < 1:
        raise ContractError('min_count must be at least 1')
    counts = Counter()
    for stream in token_streams:
        counts.update(stream)
    survivors = [term for term, count in counts.items() if count >= min_count]
    if not survivors:
        raise EmptyCorpusError(f'no term occurs at least {min_count} times')
    if len(survivors) < len(counts):
        logger.warning('dropped %d terms seen fewer than %d times', len(counts) - len(survivors), min_count)
    return Vocabulary.from_terms(survivors)


def _encode(token_lists, vocab):
    documents = []
    dropped = 0
    for tokens in token_lists:
        ids = [vocab.index[term] for term in tokens if term in vocab.index]
        if ids:
            documents.append(Document(ids))
        else:
            dropped += 1
    if dropped:
        logger.warning('dropped %d empty documents', dropped)
    if not documents:
        raise EmptyCorpusError('every document is empty')
    return Corpus(documents, vocab)


def read_plaintext(lines, min_count=1):
    """One document per line, tokenized with ``tokenize``."""
    token_lists = [tokenize(line) for line in lines]
    if not any(token_lists):
        raise EmptyCorpusError('the input holds no non-empty document')
    return _encode(token_lists, build_vocab(token_lists, min_count))


def encode_document(line, vocab):
    """Map one text line onto an existing vocabulary.

    Returns ``(document, unknown_terms)``; the document is None when no
    token of the line is in the vocabulary.
    """
    tokens = tokenize(line)
    ids = [vocab.index[term] for term in tokens if term in vocab.index]
    unknown = [term for term in tokens if term not in vocab.index]
    return (Document(ids) if ids else None), unknown


def prune_vocabulary(corpus, min_count):
    """Drop terms seen fewer than ``min_count`` times, then any emptied document."""
    if min_count <= 1:
        return corpus
    terms = corpus.vocab.terms
    token_lists = [[terms[i] for i in doc.tokens] for doc in corpus.documents]
    return _encode(token_lists, build_vocab(token_lists, min_count))


def _parse_int(text, line_number, what):
    try:
        return int(text)
    except ValueError:
        raise ParseError(line_number, f'{what} must be an integer, got {text!r}') from None


def read_vocab(lines, expected_size=None):
    """One term per line; trailing blank lines are ignored."""
    terms = [line.rstrip('\r\n') for line in lines]
    while terms and not terms[-1].strip():
        terms.pop()
    if expected_size is not None and len(terms) != expected_size:
        raise ParseError(len(terms) + 1, f'vocabulary has {len(terms)} terms, header says {expected_size}')
    try:
        return Vocabulary.from_terms(terms)
    except ValidationError as error:
        raise ParseError(len(terms), '; '.join(error.messages)) from error


def read_bow(stream, vocab_lines):
    """Read a UCI bag-of-words stream and its vocabulary.

    Each document's tokens are its word ids repeated by count, in
    ascending word id order.
    """
    numbered = enumerate(stream, start=1)
    last_line = 0

    def next_line(what):
        nonlocal last_line
        item = next(numbered, None)
        if item is None:
            raise ParseError(last_line + 1, f'stream ended before {what}')
        last_line = item[0]
        return item

    header = []
    for name in ('document count', 'vocabulary size', 'entry count'):
        number, raw = next_line(f'the {name}')
        value = _parse_int(raw.strip(), number, name)
        if value < 0:
            raise ParseError(number, f'{name} cannot be negative')
        header.append(value)
    num_docs, vocab_size, nnz = header

    counts = defaultdict(Counter)
    for entry in range(nnz):
        number, raw = next_line(f'entry {entry + 1} of {nnz}')
        fields = raw.split()
        if len(fields) != 3:
            raise ParseError(number, f'expected "docId wordId count", got {raw.strip()!r}')
        doc_id, word_id, count = (_parse_int(field, number, 'ids and counts') for field in fields)
        if not 1 <= doc_id <= num_docs:
            raise ParseError(number, f'docId {doc_id} is outside 1..{num_docs}')
        if not 1 <= word_id <= vocab_size:
            raise ParseError(number, f'wordId {word_id} is outside 1..{vocab_size}')
        if count < 1:
            raise ParseError(number, f'count must be positive, got {count}')
        counts[doc_id][word_id - 1] += count
    for number, raw in numbered:
        if raw.strip():
            raise ParseError(number, f'more entries than the {nnz} announced')

    vocab = read_vocab(vocab_lines, vocab_size)
    documents = []
    for doc_id in range(1, num_docs + 1):
        if not counts[doc_id]:
            continue
        word_ids = sorted(counts[doc_id])
        documents.append(Document(np.repeat(word_ids, [counts[doc_id][w] for w in word_ids])))
    if len(documents) < num_docs:
        logger.warning('dropped %d empty documents', num_docs - len(documents))
    if not documents:
        raise EmptyCorpusError('the bag-of-words stream holds no entries')
    return Corpus(documents, vocab)


def write_bow(corpus, stream):
    """Write ``corpus`` in the layout ``read_bow`` reads, word ids ascending."""
    rows = []
    for doc_id, doc in enumerate(corpus.documents, start=1):
        word_ids, counts = np.unique(doc.tokens, return_counts=True)
        rows.extend((doc_id, int(w) + 1, int(c)) for w, c in zip(word_ids, counts))
    stream.write(f'{corpus.num_documents}\n{corpus.vocab_size}\n{len(rows)}\n')
    for row in rows:
        stream.write('%d %d %d\n' % row)


def write_vocab(vocab, stream):
    for term in vocab.terms:
        stream.write(f'{term}\n')
