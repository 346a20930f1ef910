"""Exception hierarchy. Everything raised on bad input derives from
:class:`TreelabError` so the CLI can map it to a data-error exit code."""


class TreelabError(Exception):
    pass


class ArffError(TreelabError, ValueError):
    """Malformed or schema-violating ARFF text."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class SchemaError(TreelabError, ValueError):
    pass


class InductionError(TreelabError, ValueError):
    pass


class SchemaMismatchError(TreelabError):
    pass


class ModelFormatError(TreelabError, ValueError):
    pass
