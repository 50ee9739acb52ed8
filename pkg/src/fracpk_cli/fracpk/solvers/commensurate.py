"""Linear fractional systems of one base order, and the commensurate expansion."""

from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Optional

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..model.params import PKParams
from ..settings import MAX_COMMENSURATE_Q
from .trajectory import COMPARTMENTS


@dataclass(frozen=True)
class LinearFDESystem:
    """D^gamma x = M x + e u(t), x(0) = x0, Caputo sense, 0 < gamma < 1.

    outputs selects the state indices reported as trajectory columns.
    """

    gamma: Fraction
    matrix: npt.NDArray[np.float64]
    input_map: npt.NDArray[np.float64]
    x0: npt.NDArray[np.float64]
    outputs: tuple[int, ...] = (0,)
    columns: tuple[str, ...] = ("x",)

    def __post_init__(self) -> None:
        """Check dimensions and the order."""
        gamma = Fraction(self.gamma)
        if not 0 < gamma < 1:
            raise ConfigError(f"base order must lie in (0, 1), got {gamma}")
        matrix = np.atleast_2d(np.asarray(self.matrix, dtype=np.float64))
        n = matrix.shape[0]
        input_map = np.asarray(self.input_map, dtype=np.float64).reshape(-1)
        x0 = np.asarray(self.x0, dtype=np.float64).reshape(-1)
        if matrix.shape != (n, n) or input_map.shape != (n,) or x0.shape != (n,):
            raise ConfigError("system matrix, input map and initial state disagree in size")
        if len(self.outputs) != len(self.columns) or any(
            not 0 <= i < n for i in self.outputs
        ):
            raise ConfigError("invalid output selection")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "input_map", input_map)
        object.__setattr__(self, "x0", x0)

    @property
    def dimension(self) -> int:
        """Number of states."""
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class CommensurateSystem(LinearFDESystem):
    """The model rewritten with base order gamma = 1/q over 2q states.

    x_0 = A1 and x_q = A2; x_i = D^{i gamma} A1 and x_{q+i} = D^{i gamma} A2.
    """

    params: Optional[PKParams] = field(default=None, compare=False)
    p: int = 0
    q: int = 1

    def with_initial_amounts(self, amounts: npt.ArrayLike) -> "CommensurateSystem":
        """Same system started from (A1(0), A2(0))."""
        a1, a2 = np.asarray(amounts, dtype=np.float64).reshape(2)
        x0 = np.zeros(self.dimension)
        x0[0], x0[self.q] = a1, a2
        return CommensurateSystem(
            gamma=self.gamma,
            matrix=self.matrix,
            input_map=self.input_map,
            x0=x0,
            outputs=self.outputs,
            columns=self.columns,
            params=self.params,
            p=self.p,
            q=self.q,
        )


def expand_commensurate(
    params: PKParams,
    p: int,
    q: int,
    initial_amounts: Optional[npt.ArrayLike] = None,
) -> CommensurateSystem:
    """Chain expansion of the model with memory order p/q.

    Every row is a shift D^gamma x_i = x_{i+1} except

        row q-1:  -(k12 + k10) x_0 + k21 x_{q+p} + u
        row 2q-1:  k12 x_0 - k21 x_{q+p}

    Args:
        params: Model constants; only the rates are used, the order is p/q.
        p: Numerator, 0 < p < q.
        q: Denominator, at most MAX_COMMENSURATE_Q.
        initial_amounts: (A1(0), A2(0)), zero by default.

    Returns:
        The 2q-state system with gamma = 1/q.

    Raises:
        ConfigError: p, q out of range.
    """
    if not 0 < p < q:
        raise ConfigError(f"need 0 < p < q, got {p}/{q}")
    if q > MAX_COMMENSURATE_Q:
        raise ConfigError(f"q = {q} exceeds {MAX_COMMENSURATE_Q}")
    n = 2 * q
    matrix = np.zeros((n, n))
    for i in range(n - 1):
        if i != q - 1:
            matrix[i, i + 1] = 1.0
    matrix[q - 1, 0] = -(params.k12 + params.k10)
    matrix[q - 1, q + p] = params.k21
    matrix[n - 1, 0] = params.k12
    matrix[n - 1, q + p] = -params.k21
    input_map = np.zeros(n)
    input_map[q - 1] = 1.0
    x0 = np.zeros(n)
    if initial_amounts is not None:
        x0[0], x0[q] = np.asarray(initial_amounts, dtype=np.float64).reshape(2)
    return CommensurateSystem(
        gamma=Fraction(1, q),
        matrix=matrix,
        input_map=input_map,
        x0=x0,
        outputs=(0, q),
        columns=COMPARTMENTS,
        params=params,
        p=p,
        q=q,
    )


def relaxation_system(gamma: float, rate: float = -1.0, x0: float = 1.0) -> LinearFDESystem:
    """Scalar D^gamma x = rate x, x(0) = x0, whose solution is x0 E_gamma(rate t^gamma)."""
    return LinearFDESystem(
        gamma=Fraction(gamma).limit_denominator(10**6),
        matrix=np.array([[rate]]),
        input_map=np.zeros(1),
        x0=np.array([x0]),
    )
