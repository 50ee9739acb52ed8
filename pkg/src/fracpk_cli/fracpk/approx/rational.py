"""Rational transfer functions P(s)/Q(s)."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.signal import zpk2tf

from ..exceptions import ConfigError
from ..invlap.transform import ComplexArg
from ..invlap.transform import TransformFunction


def _trim(coefficients: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Drop leading zeros, keeping at least one coefficient."""
    array = np.atleast_1d(np.asarray(coefficients, dtype=np.float64))
    nonzero = np.flatnonzero(array)
    if len(nonzero) == 0:
        return np.zeros(1)
    return array[nonzero[0] :]


@dataclass(frozen=True)
class RationalTransferFunction:
    """Real-coefficient ratio of polynomials in descending powers of s.

    Filters built from poles and zeros keep that factored form, which is then
    used for evaluation; the expanded coefficients of high-degree filters are
    badly conditioned.
    """

    numerator: npt.NDArray[np.float64]
    denominator: npt.NDArray[np.float64]
    zeros: Optional[npt.NDArray[np.complex128]] = None
    poles: Optional[npt.NDArray[np.complex128]] = None
    gain: Optional[float] = None

    def __post_init__(self) -> None:
        """Normalize coefficient arrays and check the denominator."""
        numerator = _trim(self.numerator)
        denominator = _trim(self.denominator)
        if denominator[0] == 0.0:
            raise ConfigError("denominator must have a nonzero leading coefficient")
        if not (np.all(np.isfinite(numerator)) and np.all(np.isfinite(denominator))):
            raise ConfigError("transfer function coefficients must be finite")
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", denominator)

    @classmethod
    def from_zpk(
        cls,
        zeros: npt.ArrayLike,
        poles: npt.ArrayLike,
        gain: float,
    ) -> "RationalTransferFunction":
        """Build from roots and gain, keeping the factored form."""
        zeros = np.asarray(zeros, dtype=np.complex128)
        poles = np.asarray(poles, dtype=np.complex128)
        numerator, denominator = zpk2tf(zeros, poles, gain)
        return cls(
            numerator=np.real(numerator),
            denominator=np.real(denominator),
            zeros=zeros,
            poles=poles,
            gain=float(gain),
        )

    @property
    def numerator_degree(self) -> int:
        """Degree of P."""
        return len(self.numerator) - 1

    @property
    def denominator_degree(self) -> int:
        """Degree of Q."""
        return len(self.denominator) - 1

    @property
    def relative_degree(self) -> int:
        """deg Q - deg P."""
        return self.denominator_degree - self.numerator_degree

    @property
    def is_proper(self) -> bool:
        """deg P <= deg Q."""
        return self.relative_degree >= 0

    @property
    def is_factored(self) -> bool:
        """True when poles, zeros and gain are stored."""
        return self.zeros is not None and self.poles is not None and self.gain is not None

    def evaluate(self, s: ComplexArg) -> ComplexArg:
        """T(s) at complex points."""
        s = np.asarray(s, dtype=np.complex128)
        if self.is_factored:
            assert self.zeros is not None and self.poles is not None  # noqa: S101
            result = np.full(s.shape, self.gain, dtype=np.complex128)
            for z in self.zeros:
                result = result * (s - z)
            for p in self.poles:
                result = result / (s - p)
            return result
        return np.polyval(self.numerator, s) / np.polyval(self.denominator, s)

    __call__ = evaluate

    def frequency_response(self, omega: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """T(j omega)."""
        return np.asarray(self.evaluate(1j * np.asarray(omega, dtype=np.float64)))

    def zpk(self) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128], float]:
        """Zeros, poles and gain, from roots when not stored."""
        if self.is_factored:
            assert self.zeros is not None and self.poles is not None  # noqa: S101
            return self.zeros, self.poles, float(self.gain)  # type: ignore[arg-type]
        gain = float(self.numerator[0] / self.denominator[0])
        return (
            np.roots(self.numerator).astype(np.complex128),
            np.roots(self.denominator).astype(np.complex128),
            gain,
        )

    def as_transform(self, label: str = "") -> TransformFunction:
        """Wrap for inverse Laplace transformation."""
        return TransformFunction(self.evaluate, 0.0, label)

    def to_dict(self) -> dict[str, object]:
        """JSON form; complex roots are written as [re, im] pairs."""
        zeros, poles, gain = self.zpk()
        return {
            "numerator": [float(c) for c in self.numerator],
            "denominator": [float(c) for c in self.denominator],
            "zeros": [[float(z.real), float(z.imag)] for z in zeros],
            "poles": [[float(p.real), float(p.imag)] for p in poles],
            "gain": gain,
        }
