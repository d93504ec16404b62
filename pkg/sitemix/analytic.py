"""
Closed-form entanglement of many-electron lattice states

Every quantity here depends only on the macroscopic densities (n, n_up,
n_down, d) and the on-site pairing amplitude zeta that fix the single-site
reduced density matrix.
"""

# Standard Library
import logging
import math
from typing import NamedTuple, Optional, Tuple

# Third Party
import numpy as np
from scipy import linalg, optimize

# sitemix
from sitemix import app_settings, constants
from sitemix.models import BcsParams, DensityParams, NagaokaParams, ParameterDomainError, SiteRDM

logger = logging.getLogger(__name__)


class NonPhysicalRDMError(ParameterDomainError):
    """Raised when a matrix handed to the concurrence is not a density matrix"""

    pass


class NagaokaEpsilon(NamedTuple):
    """Nagaoka entanglement from the RDM eigenvalues and from the printed closed form"""

    direct: float
    paper_form: float

    @property
    def discrepancy(self) -> float:
        return self.paper_form - self.direct


def site_rdm(params: DensityParams) -> SiteRDM:
    """
    Single-site RDM fixed by the densities

    diag(1-n+d, d, n_up-d, n_down-d) with zeta on the hole/double
    off-diagonal pair. DensityParams validates itself on construction, so
    out-of-domain bundles never reach this point.
    """
    entries = np.diag(
        [
            1.0 - params.n + params.d,
            params.d,
            params.n_up - params.d,
            params.n_down - params.d,
        ]
    ).astype(np.complex128)
    entries[constants.HOLE, constants.DOUBLE] = params.zeta
    entries[constants.DOUBLE, constants.HOLE] = params.zeta
    return SiteRDM(entries=entries)


def epsilon(rdm: SiteRDM) -> float:
    """(4/3)(1 - Tr rho^2): site mixedness scaled so the maximally mixed site gives 1"""
    return 4.0 / 3.0 * (1.0 - rdm.purity)


def class_maximum(kind: str) -> float:
    """
    Entanglement ceiling of a class of states

    spin-only (d=0, n=1): 2/3; with-holes (d=0, n<1): 8/9; full: 1.
    """
    optimal = {
        constants.CLASS_SPIN_ONLY: DensityParams(n=1.0, n_up=0.5, n_down=0.5, d=0.0),
        constants.CLASS_WITH_HOLES: DensityParams(n=2.0 / 3.0, n_up=1.0 / 3.0, n_down=1.0 / 3.0, d=0.0),
        constants.CLASS_FULL: DensityParams(n=1.0, n_up=0.5, n_down=0.5, d=0.25),
    }
    kinds = dict(constants.CLASS_CHOICES)
    if kind not in kinds:
        raise ParameterDomainError(f"Unknown entanglement class {kind!r}, expected one of {', '.join(kinds)}")
    logger.debug(f"[Analytic] Class ceiling for {kinds[kind].lower()}")
    return epsilon(site_rdm(optimal[kind]))


def entanglement_hierarchy(params: DensityParams, tolerance: float = 1e-12) -> str:
    """Which class ceiling bounds a density bundle"""
    if params.d <= tolerance and params.zeta <= tolerance:
        if abs(params.n - 1.0) <= tolerance:
            return constants.CLASS_SPIN_ONLY
        return constants.CLASS_WITH_HOLES
    return constants.CLASS_FULL


# Nagaoka


def nagaoka_epsilon(params: NagaokaParams) -> NagaokaEpsilon:
    """
    Entanglement of the member with N_down = l of the one-hole maximal-spin multiplet

    `direct` feeds the RDM eigenvalues (1/N, 0, 1-(l+1)/N, l/N) into epsilon.
    `paper_form` is the printed closed form (8(l+1)/3N)(1 - l/N), which sits
    exactly 8/(3N^2) above it.
    """
    N = params.N
    l = params.l
    eigenvalues = np.array([1.0 / N, 0.0, 1.0 - (l + 1) / N, l / N])
    direct = 4.0 / 3.0 * (1.0 - float(np.sum(eigenvalues**2)))
    paper_form = 8.0 * (l + 1) / (3.0 * N) * (1.0 - l / N)
    return NagaokaEpsilon(direct=direct, paper_form=paper_form)


def nagaoka_paper_maximum(N: int) -> float:
    """Printed multiplet maximum (2/3)(1 + 1/N)^2"""
    return 2.0 / 3.0 * (1.0 + 1.0 / N) ** 2


def nagaoka_optimal_l(N: int) -> Tuple[int, float]:
    """Integer down-spin count maximizing the direct Nagaoka entanglement (smallest l on ties)"""
    values = [nagaoka_epsilon(NagaokaParams(N=N, l=l)).direct for l in range(N)]
    best = int(np.argmax(values))
    return best, values[best]


# Gutzwiller


def _check_gutzwiller_domain(g: float, n: float) -> None:
    if not 0.0 <= g <= 1.0:
        raise ParameterDomainError(f"Projection amplitude g={g!r} outside [0, 1]")
    if not 0.0 < n <= 1.0:
        raise ParameterDomainError(f"Electron density n={n!r} outside (0, 1]")


def gutzwiller_d(g: float, n: float) -> float:
    """
    Double occupancy of the 1-D Gutzwiller state (Metzner-Vollhardt)

    d = (1/2) g^2/(1-g^2)^2 [-n(1-g^2) - log(1 - n(1-g^2))]

    Near g = 1 the bracket cancels to second order, so a short series in
    x = 1-g^2 replaces the direct formula there:
    d = (g^2/2) sum_{m>=2} n^m x^(m-2) / m.
    """
    _check_gutzwiller_domain(g, n)
    if g == 0.0:
        return 0.0
    x = 1.0 - g * g
    if abs(x) < app_settings.SITEMIX_GUTZWILLER_SERIES_CUTOFF:
        series = sum(n**m * x ** (m - 2) / m for m in range(2, 7))
        return 0.5 * g * g * series
    y = n * x
    return 0.5 * g * g / (x * x) * (-y - math.log1p(-y))


def gutzwiller_params(g: float, n: float) -> DensityParams:
    return DensityParams.unpolarized(n=n, d=gutzwiller_d(g, n))


def gutzwiller_epsilon(g: float, n: float) -> float:
    """Entanglement of the Gutzwiller-projected Fermi sea"""
    return epsilon(site_rdm(gutzwiller_params(g, n)))


def metallic_epsilon(n: float) -> float:
    """Entanglement of the uncorrelated Fermi sea, d = n^2/4"""
    if not 0.0 < n <= 1.0:
        raise ParameterDomainError(f"Electron density n={n!r} outside (0, 1]")
    return epsilon(site_rdm(DensityParams.unpolarized(n=n, d=n * n / 4.0)))


# BCS


def bcs_zeta(params: BcsParams) -> float:
    """
    On-site pairing amplitude of the narrow-shell BCS state

    zeta = (3 n Delta_0 / 4 E_F) asinh(hbar omega_D / Delta_0), continued to 0 at Delta_0 = 0.
    """
    if params.delta0 == 0.0:
        return 0.0
    return 3.0 * params.n * params.delta0 / (4.0 * params.e_f) * math.asinh(params.omega_d / params.delta0)


def pairing_params(n: float, zeta: float) -> DensityParams:
    """
    Densities of an unpolarized paired state, d = n^2/4 + zeta^2

    Raises:
        ParameterDomainError: when n/2 - d <= 0 for nonzero zeta, where the
            closed-form zeta has left the range in which it describes a state
    """
    d = n * n / 4.0 + zeta * zeta
    if zeta > 0.0 and n / 2.0 - d <= 0.0:
        raise ParameterDomainError(
            f"Gap too large for density: zeta={zeta!r} gives d={d!r} >= n/2={n / 2.0!r} "
            f"(need zeta^2 < (n/2)(1-n/2))"
        )
    return DensityParams.unpolarized(n=n, d=d, zeta=zeta)


def pairing_rdm(n: float, zeta: float) -> SiteRDM:
    return site_rdm(pairing_params(n, zeta))


def bcs_params(params: BcsParams) -> DensityParams:
    return pairing_params(params.n, bcs_zeta(params))


def bcs_rdm(params: BcsParams) -> SiteRDM:
    """Single-site RDM of the BCS state, with the pairing amplitude off the diagonal"""
    return site_rdm(bcs_params(params))


def bcs_epsilon(params: BcsParams) -> float:
    return epsilon(bcs_rdm(params))


# Concurrence


def concurrence_x(n: float, d: float, zeta: float) -> float:
    """On-site up/down concurrence of the unpolarized X-shaped RDM: 2 max(zeta - |n/2 - d|, 0)"""
    return 2.0 * max(zeta - abs(n / 2.0 - d), 0.0)


def bcs_concurrence(params: BcsParams) -> float:
    density = bcs_params(params)
    return concurrence_x(density.n, density.d, density.zeta)


# Two-qubit reading of the site: (up qubit) x (down qubit), computational
# order |00>, |01>, |10>, |11>. hole -> |00>, down -> |01>, up -> |10>, double -> |11>.
_QUBIT_ORDER = [constants.HOLE, constants.DOWN, constants.UP, constants.DOUBLE]
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


def wootters_concurrence(rdm: SiteRDM) -> float:
    """
    Wootters concurrence between the up-spin and down-spin occupations of one site

    C = max(0, l1 - l2 - l3 - l4), l_i the decreasing square roots of the
    eigenvalues of rho (sy x sy) rho* (sy x sy).

    Raises:
        NonPhysicalRDMError: if rho is not positive semidefinite
    """
    smallest = float(rdm.eigenvalues[0])
    if smallest < -app_settings.SITEMIX_MATRIX_TOLERANCE:
        raise NonPhysicalRDMError(f"Concurrence needs a positive semidefinite RDM (eigenvalue {smallest:.3e})")
    rho = rdm.entries[np.ix_(_QUBIT_ORDER, _QUBIT_ORDER)]
    rho_tilde = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    # abs guards tiny negative roundoff before the square root
    roots = np.sqrt(np.sort(np.abs(np.real(linalg.eigvals(rho @ rho_tilde))))[::-1])
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def concurrence_onset(n: float, omega_ef: float) -> Optional[float]:
    """
    Gap ratio Delta_0/(hbar omega_D) where the BCS on-site concurrence switches on

    Solves zeta + zeta^2 = (n/2)(1 - n/2) along the closed-form zeta.
    Returns None when zeta never gets there for ratios up to 1e3.
    """
    if not 0.0 < n <= 1.0:
        raise ParameterDomainError(f"Electron density n={n!r} outside (0, 1]")
    if omega_ef <= 0.0:
        raise ParameterDomainError(f"Debye ratio omega_ef={omega_ef!r} must be positive")
    target = n / 2.0 * (1.0 - n / 2.0)

    def excess(ratio: float) -> float:
        zeta = bcs_zeta(BcsParams.from_ratios(n=n, omega_ef=omega_ef, delta_ratio=ratio))
        return zeta + zeta * zeta - target

    low, high = 1e-12, 1e3
    if excess(high) < 0.0:
        logger.info(f"[Analytic] No concurrence onset for n={n!r}, omega_ef={omega_ef!r}")
        return None
    return float(optimize.brentq(excess, low, high, xtol=1e-14, rtol=4 * np.finfo(float).eps))
