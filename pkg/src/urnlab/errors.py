class UrnlabError(Exception):
    pass


class NotExplosive(UrnlabError):
    """Birth process with beta <= 1 has no finite explosion time."""


class OutOfRegime(UrnlabError):
    """Parameters outside the range a prediction is stated for."""


class Unclassified(UrnlabError):
    """Initial condition falls in a gap of the case analysis."""


class GridTooLarge(UrnlabError):
    pass


class StartedOutsideDomain(UrnlabError):
    pass


class TooFewSamples(UrnlabError):
    pass


class ConfigError(UrnlabError):
    pass
