"""App Settings"""

# Standard Library
import logging
import os

logger = logging.getLogger(__name__)


def _setting(name: str, default, cast=None):
    """Read a setting from the environment, falling back to its default"""
    raw = os.environ.get(name)
    if raw is None:
        return default

    cast = cast or type(default)
    try:
        return cast(raw)
    except (TypeError, ValueError):
        logger.warning(f"[Settings] Ignoring invalid value {raw!r} for {name}, using {default!r}")
        return default


# Lattice size limits
SITEMIX_MAX_SITES = _setting("SITEMIX_MAX_SITES", 12)  # Dense 4^L storage cap
SITEMIX_MAX_FULL_SPACE_SITES = _setting("SITEMIX_MAX_FULL_SPACE_SITES", 8)  # Number-nonconserving oracle states
SITEMIX_MAX_SECTOR_SITES = _setting("SITEMIX_MAX_SECTOR_SITES", 10)  # Number-conserving oracle states

# Numerical tolerances
SITEMIX_NORM_TOLERANCE = _setting("SITEMIX_NORM_TOLERANCE", 1e-8)  # Input normalization gate
SITEMIX_MATRIX_TOLERANCE = _setting("SITEMIX_MATRIX_TOLERANCE", 1e-10)  # Hermiticity and PSD checks
SITEMIX_SHELL_GAP = _setting("SITEMIX_SHELL_GAP", 1e-9)  # Minimum level spacing at a closed shell

# Gutzwiller double occupancy
SITEMIX_GUTZWILLER_SERIES_CUTOFF = _setting("SITEMIX_GUTZWILLER_SERIES_CUTOFF", 1e-6)  # |1-g^2| below this uses the series
SITEMIX_FD_RELATIVE_STEP = _setting("SITEMIX_FD_RELATIVE_STEP", 1e-4)
SITEMIX_FD_MIN_G = _setting("SITEMIX_FD_MIN_G", 1e-3)

# Energy scales (all energies in units of the Fermi energy)
SITEMIX_FERMI_ENERGY = _setting("SITEMIX_FERMI_ENERGY", 1.0)
SITEMIX_HOPPING = _setting("SITEMIX_HOPPING", 1.0)  # Oracle ring band, E_k = 2t(1 - cos k)

# Validation suite sample counts
SITEMIX_VALIDATION_SAMPLES = _setting("SITEMIX_VALIDATION_SAMPLES", 1000)
SITEMIX_VALIDATION_BCS_SETTINGS = _setting("SITEMIX_VALIDATION_BCS_SETTINGS", 20)
