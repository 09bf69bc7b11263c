class MetaActError(Exception):
    exit_code = 1


class ConfigError(MetaActError):
    """Bad configuration: unknown key, range violation, syntax error, unknown name."""
    exit_code = 2

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        if line is not None:
            message = 'line %d: %s' % (line, message)
        if key is not None:
            message = '%s: %s' % (key, message)
        super().__init__(message)


class SpecError(ConfigError):
    """Actuator spec invariant violation, `kind` is one of
    dimension / bounds / overlap / range / count / name."""

    def __init__(self, message, field, kind):
        self.field = field
        self.kind = kind
        super().__init__(message, key=field)


class NumericalError(MetaActError):
    exit_code = 3
