from functools import cached_property
from typing import Any, Dict, List, Tuple

import numpy as np
import numpy.typing as npt

from semigfpy.config import N_INNER, N_OUTER


def chebyshev_nodes(order: int) -> List[Tuple[float, float]]:
    """Compute the Chebyshev-Gauss (first kind) nodes and weights.

    The rule approximates `int_{-1}^{1} f(x) / sqrt(1 - x^2) dx` by `sum_k w_k f(x_k)`.

    Args:
        order (int): The number of nodes.

    Raises:
        ValueError: Raised if `order` is not a positive integer.

    Returns:
        List[Tuple[float, float]]: The `(node, weight)` pairs, nodes strictly decreasing.
    """
    nodes, weights = chebyshev_arrays(order=order)
    return list(zip(nodes.tolist(), weights.tolist()))


def chebyshev_arrays(order: int) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Compute the Chebyshev-Gauss nodes and weights as arrays.

    Args:
        order (int): The number of nodes.

    Raises:
        ValueError: Raised if `order` is not a positive integer.

    Returns:
        Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]: The nodes and the weights.
    """
    if isinstance(order, bool) or int(order) != order or order < 1:
        raise ValueError(f'Chebyshev-Gauss order must be a positive integer, got {order}.')
    order = int(order)
    k = np.arange(1, order + 1, dtype=np.float64)
    nodes = np.cos((2 * k - 1) * np.pi / (2 * order))
    # exact symmetry about 0 (cos(pi / 2) is not exactly 0 in floating point)
    nodes = (nodes - nodes[::-1]) / 2
    weights = np.full(order, np.pi / order)
    return nodes, weights


class QuadratureSpec:
    def __init__(self,
                 n_outer: int = N_OUTER,
                 n_inner: int = N_INNER):
        """Create the pair of Chebyshev-Gauss orders used by the closed-form rates.

        Args:
            n_outer (int, optional): The outer order (N). Defaults to N_OUTER.
            n_inner (int, optional): The inner order (M). Defaults to N_INNER.

        Raises:
            ValueError: Raised if an order is not a positive integer.
        """
        for name, order in [('n_outer', n_outer), ('n_inner', n_inner)]:
            if isinstance(order, bool) or int(order) != order or order < 1:
                raise ValueError(f'{name} must be a positive integer, got {order}.')
        self.n_outer = int(n_outer)
        self.n_inner = int(n_inner)

    def __str__(self) -> str:
        return f'Chebyshev-Gauss N={self.n_outer}, M={self.n_inner}'

    def __repr__(self) -> str:
        return str(self)

    def __eq__(self,
               other: 'QuadratureSpec') -> bool:
        if isinstance(other, QuadratureSpec):
            return (self.n_outer, self.n_inner) == (other.n_outer, other.n_inner)
        return False

    def __hash__(self) -> int:
        return hash((self.n_outer, self.n_inner))

    @cached_property
    def outer(self) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """The outer nodes and weights (read-only arrays)."""
        return _frozen(*chebyshev_arrays(order=self.n_outer))

    @cached_property
    def inner(self) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """The inner nodes and weights (read-only arrays)."""
        return _frozen(*chebyshev_arrays(order=self.n_inner))

    def doubled(self) -> 'QuadratureSpec':
        """Get a copy with both orders doubled.

        Returns:
            QuadratureSpec: The refined specification.
        """
        return QuadratureSpec(n_outer=2 * self.n_outer,
                              n_inner=2 * self.n_inner)

    def to_json(self) -> Dict[str, Any]:
        return {
            'n_outer': self.n_outer,
            'n_inner': self.n_inner
        }

    @staticmethod
    def from_json(my_args: Dict[str, Any]) -> 'QuadratureSpec':
        return QuadratureSpec(n_outer=my_args['n_outer'],
                              n_inner=my_args['n_inner'])


def _frozen(*arrs: npt.NDArray[np.float64]) -> Tuple[npt.NDArray[np.float64], ...]:
    for arr in arrs:
        arr.setflags(write=False)
    return arrs
