class MonitoringError(Exception):
    pass


class NodeCapExceeded(MonitoringError):
    def __init__(self, cap: int) -> None:
        super().__init__("Exploration exceeded {} nodes".format(cap))
        self.cap = cap


class SynthesisError(MonitoringError):
    pass


class DisabledLetter(MonitoringError):
    def __init__(self, letter: str, position: int) -> None:
        super().__init__(
            "Letter {!r} is not enabled at position {}".format(letter, position)
        )
        self.letter = letter
        self.position = position


class BoundExceeded(MonitoringError):
    pass


class ConversionRefused(MonitoringError):
    pass
