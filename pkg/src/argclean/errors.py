"""Shared exception types. The CLI maps these onto exit codes."""


class ConfigError(ValueError):
    """Bad configuration: unknown format tags, invalid thresholds, missing inputs."""


class ParseError(ValueError):
    """Malformed corpus or data file; message carries the line/record index."""

    def __init__(self, message: str, *, line: int | None = None, record: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}: "
        elif record is not None:
            loc = f"record {record}: "
        super().__init__(f"{loc}{message}")
        self.line = line
        self.record = record


class DataEmptyError(ValueError):
    """An operation received no usable data (empty corpus, no units)."""


class KappaUndefined(ValueError):
    """Agreement coefficient undefined for degenerate marginals."""


class IncompleteBatchError(ValueError):
    """An annotation batch is missing labels; lists the (annotator, item) pairs."""

    def __init__(self, missing: list[tuple[str, str]]):
        self.missing = list(missing)
        pairs = ", ".join(f"({a}, {i})" for a, i in self.missing)
        super().__init__(f"incomplete annotation batch, missing labels: {pairs}")
