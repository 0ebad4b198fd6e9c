import math
from typing import List

import numpy as np
import numpy.typing as npt


class Moments:
    def __init__(self,
                 count: int = 0,
                 mean: float = 0.,
                 m2: float = 0.):
        """Streaming first and second central moments (sum of squared deviations).

        Args:
            count (int, optional): Number of samples. Defaults to 0.
            mean (float, optional): The sample mean. Defaults to 0.
            m2 (float, optional): The sum of squared deviations from the mean. Defaults to 0.
        """
        self.count = count
        self.mean = mean
        self.m2 = m2

    def __str__(self) -> str:
        return f'Moments(n={self.count}, mean={self.mean}, m2={self.m2})'

    def __repr__(self) -> str:
        return str(self)

    @staticmethod
    def of(x: npt.NDArray[np.float64]) -> 'Moments':
        """Compute the moments of a batch of samples (two-pass within the batch).

        Args:
            x (npt.NDArray[np.float64]): The samples.

        Returns:
            Moments: The batch moments.
        """
        if x.size == 0:
            return Moments()
        mean = float(np.mean(x))
        return Moments(count=int(x.size),
                       mean=mean,
                       m2=float(np.sum((x - mean) ** 2)))

    def merge(self,
              other: 'Moments') -> 'Moments':
        """Combine two sets of moments (Chan et al. update).

        Args:
            other (Moments): The moments of a disjoint set of samples.

        Returns:
            Moments: The moments of the union.
        """
        if other.count == 0:
            return Moments(self.count, self.mean, self.m2)
        if self.count == 0:
            return Moments(other.count, other.mean, other.m2)
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta ** 2 * self.count * other.count / n
        return Moments(count=n, mean=mean, m2=m2)

    @property
    def variance(self) -> float:
        """The unbiased sample variance (0 with fewer than two samples)."""
        return self.m2 / (self.count - 1) if self.count > 1 else 0.

    @property
    def std_err(self) -> float:
        """The standard error of the mean."""
        return math.sqrt(self.variance / self.count) if self.count > 0 else 0.


def pairwise_merge(parts: List[Moments]) -> Moments:
    """Merge per-block moments along a fixed binary tree.

    Blocks are merged in adjacent pairs (0+1, 2+3, ...) level by level, so the
    floating-point result only depends on the block order.

    Args:
        parts (List[Moments]): The per-block moments, in block order.

    Returns:
        Moments: The merged moments.
    """
    level = list(parts)
    if not level:
        return Moments()
    while len(level) > 1:
        nxt = [level[i].merge(level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2 == 1:
            nxt.append(level[-1])
        level = nxt
    return level[0]
