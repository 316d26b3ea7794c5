"""
Test utilities for the potentials app.
Random samples of simplex points, velocities and momenta.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class SampleBuilder:
    """Builder pattern for random (m, v, theta) stacks."""
    d: int = 2
    count: int = 50
    seed: int = 7
    margin: float = 0.05
    speed: float = 3.0

    def with_d(self, d: int) -> 'SampleBuilder':
        """Set the number of labels."""
        self.d = d
        return self

    def with_count(self, count: int) -> 'SampleBuilder':
        """Set the number of samples."""
        self.count = count
        return self

    def with_seed(self, seed: int) -> 'SampleBuilder':
        """Set the random seed."""
        self.seed = seed
        return self

    def with_speed(self, speed: float) -> 'SampleBuilder':
        """Set the velocity scale."""
        self.speed = speed
        return self

    def build(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Interior points, zero-sum velocities and momenta in [-1, 1]."""
        rng = np.random.default_rng(self.seed)
        raw = rng.dirichlet(np.ones(self.d), size=self.count)
        m = self.margin + (1.0 - self.d * self.margin) * raw
        v = rng.uniform(-self.speed, self.speed, size=(self.count, self.d))
        v -= v.mean(axis=1, keepdims=True)
        theta = rng.uniform(-1.0, 1.0, size=(self.count, self.d))
        return m, v, theta
