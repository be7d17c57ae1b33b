"""Exception types shared across the framework."""


class DialogkitError(Exception):
    """Base class for all framework errors."""


class MissingFile(DialogkitError):
    def __init__(self, name: str, root: str = ""):
        self.name = name
        self.root = root
        super().__init__(f"missing pack file: {name}" + (f" in {root}" if root else ""))


class ParseError(DialogkitError):
    def __init__(self, file: str, line: int, reason: str):
        self.file = file
        self.line = line
        self.reason = reason
        super().__init__(f"{file}:{line}: {reason}")


class DanglingReference(DialogkitError):
    def __init__(self, file: str, symbol: str, detail: str = ""):
        self.file = file
        self.symbol = symbol
        msg = f"{file}: unknown reference '{symbol}'"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class CorrectionTargetNotFound(DialogkitError):
    """A correction named an old value that matches no current binding."""

    def __init__(self, old_value, new_value, semantic_class):
        self.old_value = old_value
        self.new_value = new_value
        self.semantic_class = semantic_class
        super().__init__(f"no binding with value {old_value!r} to correct")


class UnmappedField(DialogkitError):
    def __init__(self, field: str):
        self.field = field
        super().__init__(f"field '{field}' has no database mapping")


class NoFormSatisfiable(DialogkitError):
    """No web form's required parameters are covered by the constraints."""


class ScrapeMismatch(DialogkitError):
    """Result page does not carry the markers the scrape spec expects."""


class QuerierUnavailable(DialogkitError):
    """Back-end unreachable; the turn should surface an apology."""


class NoRuleMatched(DialogkitError):
    def __init__(self, act: str):
        self.act = act
        super().__init__(f"no rendering rule matched act {act}")


class UnknownDomain(DialogkitError):
    def __init__(self, domain: str):
        self.domain = domain
        super().__init__(f"unknown domain '{domain}'")


class SessionClosed(DialogkitError):
    """The session already ended with a goodbye."""


class UnknownSession(DialogkitError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"unknown session '{session_id}'")
