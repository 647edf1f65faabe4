class ElasticaError(ValueError):
    """
    Base class of all domain errors. Subclasses ValueError so callers that
    only expect invalid values keep working.
    """

    def prefixed(self, prefix: str) -> "ElasticaError":
        """
        The same error with a location, e.g. a file path, in front of the message.
        """
        return type(self)(f"{prefix}: {self}")


class InvalidArgumentError(ElasticaError):
    pass


class InjectivityViolationError(ElasticaError):
    pass


class SolverFailureError(ElasticaError):
    pass


class UnsupportedOrderError(ElasticaError):
    pass


class _NodeError(ElasticaError):
    def __init__(self, message: str, node: int = None):
        """
        :param message: Human readable description.
        :param node: Index of the offending grid node, when known.
        """
        self.detail = message
        self.node = node
        if node is not None:
            message = f"{message} (node {node})"
        super().__init__(message)

    def prefixed(self, prefix: str) -> "_NodeError":
        return type(self)(f"{prefix}: {self.detail}", node=self.node)


class ImmersionViolationError(_NodeError):
    pass


class AdjacencyViolationError(_NodeError):
    pass


class InitFailureError(_NodeError):
    pass
