"""History sums of product-integration solvers.

Solvers of D^gamma x = f need, at every step m, sums

    c_m = sum_{j < m} w_{m-j} f_j

over the whole past, where f_j only becomes known once step j is done.
Divide and conquer computes them in O(N log^2 N): the left half of a block
is finished first, its contribution to the right half is added with one FFT
convolution, then the right half is solved the same way. Small blocks are
summed directly.
"""

import logging
from collections.abc import Callable
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy import fft

from ..exceptions import DivergenceError
from ..settings import CONVOLUTION_BLOCK_SIZE


logger = logging.getLogger(__name__)

StepFunction = Callable[[int, list[npt.NDArray[np.float64]]], npt.NDArray[np.float64]]


class HistoryConvolution:
    """Online convolution of a vector history against fixed kernels.

    Args:
        kernels: Weight arrays w with w[l] the weight of lag l; w[0] is unused.
        size: Number of steps including step 0.
        width: Length of each history vector f_j.
        block: Size below which sums are evaluated directly.
    """

    def __init__(
        self,
        kernels: Sequence[npt.NDArray[np.float64]],
        size: int,
        width: int,
        block: int = CONVOLUTION_BLOCK_SIZE,
    ) -> None:
        """Allocate history and accumulators."""
        self.size = size
        self.width = width
        self.block = block
        padded = block
        while padded < size:
            padded *= 2
        self.padded = padded
        self.kernels = [self._pad(np.asarray(w, dtype=np.float64), padded) for w in kernels]
        self.history = np.zeros((size, width))
        self.sums = [np.zeros((size, width)) for _ in kernels]
        self._spectra: dict[tuple[int, int], npt.NDArray[np.complex128]] = {}

    @staticmethod
    def _pad(w: npt.NDArray[np.float64], length: int) -> npt.NDArray[np.float64]:
        padded = np.zeros(length)
        count = min(length, len(w))
        padded[:count] = w[:count]
        return padded

    def _spectrum(self, kernel: int, length: int) -> npt.NDArray[np.complex128]:
        key = (kernel, length)
        if key not in self._spectra:
            self._spectra[key] = fft.rfft(self.kernels[kernel][:length])
        return self._spectra[key]

    def run(
        self, first: npt.NDArray[np.float64], step: StepFunction
    ) -> npt.NDArray[np.float64]:
        """Fill the history.

        Args:
            first: f_0.
            step: Called as step(m, [c_m per kernel]) for m = 1..size-1 once all
                contributions of f_0..f_{m-1} are in; returns f_m.

        Returns:
            The history f_0..f_{size-1}, one row per step.

        Raises:
            DivergenceError: A step returned non-finite values.
        """
        self.history[0] = first
        self._solve(0, self.padded, step)
        return self.history

    def _solve(self, lo: int, hi: int, step: StepFunction) -> None:
        if lo >= self.size:
            return
        if hi - lo <= self.block:
            self._solve_directly(lo, min(hi, self.size), step)
            return
        mid = (lo + hi) // 2
        self._solve(lo, mid, step)
        if mid < self.size:
            length = hi - lo
            top = min(hi, self.size)
            transformed = fft.rfft(self.history[lo:mid], n=length, axis=0)
            for k, sums in enumerate(self.sums):
                product = transformed * self._spectrum(k, length)[:, np.newaxis]
                contribution = fft.irfft(product, n=length, axis=0)
                sums[mid:top] += contribution[mid - lo : top - lo]
        self._solve(mid, hi, step)

    def _solve_directly(self, lo: int, hi: int, step: StepFunction) -> None:
        for m in range(max(lo, 1), hi):
            current = []
            for kernel, sums in zip(self.kernels, self.sums):
                if m > lo:
                    sums[m] += kernel[m - lo : 0 : -1] @ self.history[lo:m]
                current.append(sums[m])
            self.history[m] = step(m, current)
        if not np.all(np.isfinite(self.history[lo:hi])):
            raise DivergenceError(f"history became non-finite between steps {lo} and {hi}")
