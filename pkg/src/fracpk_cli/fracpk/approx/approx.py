"""Approx command module."""

import logging
from pathlib import Path
from typing import Any

import numpy as np
from rich import print

from ..config import RunConfig
from ..exceptions import ConfigError
from ..model.params import nominal_params
from ..solvers.simulate import METHOD_PARAMS
from ..solvers.simulate import Method
from ..solvers.simulate import parse_method
from ..solvers.simulate import s_alpha_approximant
from ..util import write_csv
from ..util import write_json
from .oustaloup import oustaloup_design
from .substitute import substitute_into_pk


logger = logging.getLogger(__name__)

RATIONAL_METHODS = (Method.pade, Method.oustaloup, Method.matsuda)
RESPONSE_POINTS = 200
RESPONSE_BAND = (1e-3, 1e4)


def approx(config: RunConfig) -> Path:
    """Emit the s^alpha approximant, the substituted G1, G2 and a frequency response.

    Writes filter.json, G1.json, G2.json, frequency_response.csv and
    metadata.json. Oustaloup filters also get their band errors reported.

    Args:
        config: Run configuration; method is pade, oustaloup or matsuda.

    Returns:
        The output directory.

    Raises:
        ConfigError: Missing or non-rational method, unknown parameters.
    """
    if config.method is None:
        raise ConfigError("approx needs a method: pade, oustaloup or matsuda")
    method = parse_method(config.method)
    if method not in RATIONAL_METHODS:
        raise ConfigError(f"{method.value} is not a rational approximation")
    config.check_params(set(METHOD_PARAMS[method] - {"h"}))
    params = nominal_params().with_overrides(**config.model)
    approximant = s_alpha_approximant(method, params.alpha, config.params)
    g1, g2 = substitute_into_pk(approximant, params)

    output_dir = config.output_dir
    write_json(output_dir / "filter.json", approximant.to_dict())
    write_json(output_dir / "G1.json", g1.to_dict())
    write_json(output_dir / "G2.json", g2.to_dict())

    omega = np.logspace(*np.log10(RESPONSE_BAND), RESPONSE_POINTS)
    response = approximant.frequency_response(omega)
    target = (1j * omega) ** params.alpha
    rows = (
        [float(w), float(20 * np.log10(abs(r))), float(np.degrees(np.angle(r))),
         float(20 * np.log10(abs(t))), float(np.degrees(np.angle(t)))]
        for w, r, t in zip(omega, response, target)
    )
    write_csv(
        output_dir / "frequency_response.csv",
        ("omega", "magnitude_db", "phase_deg", "target_magnitude_db", "target_phase_deg"),
        rows,
    )

    metadata: dict[str, Any] = {
        "config": config.to_dict(),
        "method": method.value,
        "alpha": params.alpha,
        "degrees": {
            "numerator": approximant.numerator_degree,
            "denominator": approximant.denominator_degree,
        },
    }
    if method is Method.oustaloup:
        design = oustaloup_design(
            params.alpha,
            float(config.params.get("wb", 1e-2)),
            float(config.params.get("wh", 1e3)),
            int(config.params.get("N", 8)),
        )
        magnitude, phase = design.band_errors()
        metadata["band_errors"] = {"magnitude_db": magnitude, "phase_deg": phase}
        print(
            f":white_check_mark:\tOustaloup band [{design.omega_b:g}, {design.omega_h:g}] rad/day: "
            f"max magnitude error {magnitude:.3g} dB, phase error at center {phase:.3g} deg"
        )
    write_json(output_dir / "metadata.json", metadata)
    print(
        f":white_check_mark:\t{method.value} approximant of s^{params.alpha} "
        f"[{approximant.numerator_degree}/{approximant.denominator_degree}], "
        f"results in {output_dir}"
    )
    return output_dir
