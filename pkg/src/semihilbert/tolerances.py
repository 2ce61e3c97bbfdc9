"""Default tolerances and named presets.

Library functions take their tolerances as explicit keyword arguments with the
defaults below; only the command-line front end consults the
``SEMIHILBERT_TOL_PROFILE`` environment variable.
"""

import os
from dataclasses import asdict, dataclass, replace

RANK_TOL = 1e-10
CLUSTER_TOL = 1e-8
BOUNDED_TOL = 1e-10
ORTH_TOL = 1e-9
GATEAUX_TOL = 1e-7
SINGLETON_TOL = 1e-9

N_ANGLES = 1024
REFINE_XTOL = 1e-12


@dataclass(frozen=True)
class Tolerances:
    rank_tol: float = RANK_TOL
    cluster_tol: float = CLUSTER_TOL
    bounded_tol: float = BOUNDED_TOL
    orth_tol: float = ORTH_TOL
    gateaux_tol: float = GATEAUX_TOL
    singleton_tol: float = SINGLETON_TOL

    def as_dict(self):
        return asdict(self)

    def updated(self, **overrides):
        """Return a copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(
        rank_tol=1e-12,
        cluster_tol=1e-10,
        bounded_tol=1e-12,
        orth_tol=1e-11,
        gateaux_tol=1e-9,
        singleton_tol=1e-11,
    ),
}

PROFILE_ENV = "SEMIHILBERT_TOL_PROFILE"


def profile_from_env(environ=None):
    """Look up the preset named by ``SEMIHILBERT_TOL_PROFILE`` (default ``default``)."""
    environ = os.environ if environ is None else environ
    name = environ.get(PROFILE_ENV, "default").strip() or "default"
    try:
        return name, PROFILES[name]
    except KeyError:
        raise ValueError(
            f"{PROFILE_ENV}={name!r} is not one of {sorted(PROFILES)}"
        ) from None
