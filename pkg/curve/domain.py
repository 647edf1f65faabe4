import math
from dataclasses import dataclass

import numpy as np

from manifold.errors import InvalidArgumentError

TOPOLOGIES = ("open", "closed")


@dataclass(frozen=True)
class Domain:
    """
    Uniform parameter grid on [0, 2pi] (open) or on the circle (closed).

    :param topology: "open" or "closed".
    :param samples: Number of nodes N (at least 8).
    """

    topology: str
    samples: int

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise InvalidArgumentError(f"domain: unknown topology '{self.topology}', expected one of {TOPOLOGIES}.")
        if int(self.samples) != self.samples or self.samples < 8:
            raise InvalidArgumentError(f"domain: samples must be an integer >= 8, got {self.samples}.")
        object.__setattr__(self, "samples", int(self.samples))

    @property
    def closed(self) -> bool:
        return self.topology == "closed"

    @property
    def spacing(self) -> float:
        if self.closed:
            return 2.0 * math.pi / self.samples
        return 2.0 * math.pi / (self.samples - 1)

    @property
    def grid(self) -> np.ndarray:
        return self.spacing * np.arange(self.samples)

    @property
    def edge_count(self) -> int:
        return self.samples if self.closed else self.samples - 1

    def quadrature_weights(self) -> np.ndarray:
        """
        Trapezoid weights for integrals in d(theta).
        """
        weights = np.full(self.samples, self.spacing)
        if not self.closed:
            weights[0] *= 0.5
            weights[-1] *= 0.5
        return weights

    def to_dict(self) -> dict:
        return {"topology": self.topology, "samples": self.samples}

    @classmethod
    def from_dict(cls, data: dict):
        if not isinstance(data, dict):
            raise InvalidArgumentError("domain: expected a JSON object.")
        for key in ("topology", "samples"):
            if key not in data:
                raise InvalidArgumentError(f"domain: field '{key}' is missing.")
        return cls(topology=data["topology"], samples=data["samples"])
