"""Exception types shared across the toolkit."""


class AcroverifyError(Exception):
    """Base class for every error raised by this package."""


class MalformedRow(AcroverifyError):
    """A TSV/JSONL data row has the wrong shape."""

    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        self.detail = detail
        msg = f"malformed row at line {line_no}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class EmptyField(AcroverifyError):
    """A required cell in a data row is blank."""

    def __init__(self, line_no: int, col: str):
        self.line_no = line_no
        self.col = col
        super().__init__(f"empty field {col!r} at line {line_no}")


class DuplicateDocId(AcroverifyError):
    """Two documents in one collection share a doc_id."""

    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"duplicate doc_id {doc_id!r}")


class FormatVersionMismatch(AcroverifyError):
    """An index file carries an unknown magic string or version."""


class EmptyLongForm(AcroverifyError):
    """A long form normalized to nothing usable."""


class AlignmentError(AcroverifyError):
    """A prediction references an entry id missing from the gold corpus."""


# --- machine translation backends ---------------------------------------

class MtError(AcroverifyError):
    """Base MT backend failure.  `retryable` marks transient errors."""

    retryable = False


class LookupMiss(MtError):
    """Dictionary backend has no entry for the source text."""

    def __init__(self, key: str):
        self.key = key
        super().__init__(f"no dictionary entry for {key!r}")


class MtNetworkError(MtError):
    """Connection-level failure talking to an HTTP backend."""


class MtTimeout(MtError):
    """HTTP backend did not answer in time."""


class MtHttpStatusError(MtError):
    """HTTP backend answered with a non-success status."""

    def __init__(self, status: int, detail: str = ""):
        self.status = status
        super().__init__(f"backend returned HTTP {status}" + (f": {detail}" if detail else ""))


class MtRateLimited(MtHttpStatusError):
    """Backend signalled rate limiting; safe to retry with backoff."""

    retryable = True


class MtProtocolError(MtError):
    """HTTP backend replied with a body we cannot interpret."""


# --- external hypothesis generator ---------------------------------------

class AdapterUnavailable(AcroverifyError):
    """External generator process could not be started or reached."""


class AdapterProtocolError(AcroverifyError):
    """External generator reply was not parseable at all."""


class AdapterTimeout(AcroverifyError):
    """External generator did not reply within the configured timeout."""
