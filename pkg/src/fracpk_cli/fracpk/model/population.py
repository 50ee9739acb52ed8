"""Perturbed patient populations."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from ..exceptions import ConfigError
from ..settings import POPULATION_MULTIPLIER_BOUNDS
from ..settings import POPULATION_P_HAT_CHOICES
from ..settings import POPULATION_Q
from ..util import write_json
from .params import PKParams
from .params import nominal_params


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PatientSample:
    """One patient: multiplicative perturbations and a perturbed order."""

    id: int
    base: PKParams
    m10: float
    m12: float
    m21: float
    p_hat: int
    q: int = POPULATION_Q
    seed: Optional[int] = None

    @property
    def order(self) -> Fraction:
        """Order p_hat/q of the Caputo term."""
        return Fraction(self.p_hat, self.q)

    @property
    def params(self) -> PKParams:
        """Realized constants, alpha = 1 - p_hat/q."""
        return PKParams(
            alpha=float(1 - self.order),
            k10=self.base.k10 * self.m10,
            k12=self.base.k12 * self.m12,
            k21=self.base.k21 * self.m21,
        )

    def to_dict(self) -> dict[str, object]:
        """Manifest entry."""
        return {
            "id": self.id,
            "m10": self.m10,
            "m12": self.m12,
            "m21": self.m21,
            "p_hat": self.p_hat,
            "seed": self.seed,
        }


def nominal_patient(
    p: int, q: int = POPULATION_Q, base: Optional[PKParams] = None
) -> PatientSample:
    """Unperturbed patient with order p/q."""
    return PatientSample(
        id=0, base=base or nominal_params(), m10=1.0, m12=1.0, m21=1.0, p_hat=p, q=q
    )


def sample_population(
    n: int, seed: int, base: Optional[PKParams] = None
) -> list[PatientSample]:
    """Draw n patients with a seeded PCG64 generator.

    Multipliers are i.i.d. uniform on the configured bounds, p_hat uniform
    over the configured choices.

    Args:
        n: Number of patients, at least 1.
        seed: Generator seed.
        base: Parameters to perturb, nominal by default.

    Returns:
        Patients with ids 1..n.

    Raises:
        ConfigError: n < 1.
    """
    if n < 1:
        raise ConfigError(f"population size must be at least 1, got {n}")
    base = base or nominal_params()
    rng = np.random.Generator(np.random.PCG64(seed))
    low, high = POPULATION_MULTIPLIER_BOUNDS
    multipliers = rng.uniform(low, high, size=(n, 3))
    p_hats = rng.choice(np.array(POPULATION_P_HAT_CHOICES), size=n)
    logger.info("Sampled %d patients with seed %d", n, seed)
    return [
        PatientSample(
            id=i + 1,
            base=base,
            m10=float(multipliers[i, 0]),
            m12=float(multipliers[i, 1]),
            m21=float(multipliers[i, 2]),
            p_hat=int(p_hats[i]),
            seed=seed,
        )
        for i in range(n)
    ]


def write_population_manifest(path: Path, population: list[PatientSample]) -> Path:
    """JSON array of {id, m10, m12, m21, p_hat, seed}."""
    return write_json(path, [patient.to_dict() for patient in population])
