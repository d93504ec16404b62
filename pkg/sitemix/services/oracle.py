"""
Exact Small-Lattice Oracle

Builds the Fermi sea, Gutzwiller-projected, BCS and Nagaoka states
explicitly on a 1-D ring and measures them by brute force, so every closed
form in sitemix.analytic can be checked against an exact number.
"""

# Standard Library
import logging
from typing import List, NamedTuple, Optional

# Third Party
import numpy as np

# sitemix
from sitemix import app_settings, constants
from sitemix.fockspace import (
    FockSpaceError,
    apply_annihilation,
    apply_creation,
    double_counts,
    from_amplitudes,
    normalize,
    occupation_masks,
    superpose,
    vacuum,
)
from sitemix.models import BcsParams, FillingSpec, LatticeSpec, ManyBodyState, NagaokaParams, ParameterDomainError

logger = logging.getLogger(__name__)


class OpenShellError(FockSpaceError):
    """Raised when the requested filling leaves a degenerate Fermi surface"""

    pass


class EmptyProjectionError(FockSpaceError):
    """Raised when a Gutzwiller projection annihilates the state"""

    pass


class FiniteDifferenceError(FockSpaceError):
    """Raised when g is too small for a stable log-derivative"""

    pass


class PairAmplitudes(NamedTuple):
    """Per-momentum Cooper pair amplitudes of a BCS product state"""

    momenta: np.ndarray
    u: np.ndarray
    v: np.ndarray

    @property
    def density(self) -> float:
        """n = (2/L) sum_k v_k^2"""
        return float(2.0 * np.sum(self.v**2) / self.v.shape[0])

    @property
    def zeta(self) -> float:
        """(1/L) sum_k u_k v_k"""
        return float(np.sum(self.u * self.v) / self.v.shape[0])


# Single-particle structure of the ring


def momentum_grid(lattice: LatticeSpec) -> np.ndarray:
    """k_j = 2 pi (j + beta) / L, beta = 0 (periodic) or 1/2 (antiperiodic)"""
    return 2.0 * np.pi * (np.arange(lattice.L) + lattice.twist) / lattice.L


def band_energy(momenta: np.ndarray, hopping: Optional[float] = None) -> np.ndarray:
    """Nearest-neighbour band shifted to start at zero: E_k = 2t(1 - cos k)"""
    hopping = app_settings.SITEMIX_HOPPING if hopping is None else hopping
    return 2.0 * hopping * (1.0 - np.cos(momenta))


def partner_indices(lattice: LatticeSpec) -> np.ndarray:
    """Index of -k_j on the grid for every j"""
    shift = int(round(2 * lattice.twist))
    return np.mod(-np.arange(lattice.L) - shift, lattice.L)


def occupied_momenta(lattice: LatticeSpec, count: int) -> np.ndarray:
    """
    Grid indices of the `count` lowest band levels, ascending

    Raises:
        OpenShellError: if level `count` is degenerate with level `count`+1
    """
    if not 0 <= count <= lattice.L:
        raise ParameterDomainError(f"Cannot place {count} electrons of one spin on {lattice.L} sites")
    momenta = momentum_grid(lattice)
    energies = band_energy(momenta)
    order = np.argsort(energies, kind="stable")
    if 0 < count < lattice.L:
        top = energies[order[count - 1]]
        if energies[order[count]] - top <= app_settings.SITEMIX_SHELL_GAP:
            degenerate = momenta[np.abs(energies - top) <= app_settings.SITEMIX_SHELL_GAP]
            names = ", ".join(f"{k / np.pi:.4g}pi" for k in degenerate)
            raise OpenShellError(
                f"Open shell: {count} electrons on the {lattice.boundary} {lattice.L}-site ring "
                f"leave degenerate momenta k = {names}"
            )
    return np.sort(order[:count])


def is_closed_shell(lattice: LatticeSpec, count: int) -> bool:
    try:
        occupied_momenta(lattice, count)
    except OpenShellError:
        return False
    return True


def closed_shell_fillings(lattice: LatticeSpec) -> List[FillingSpec]:
    """Every (N_up, N_down) for which the Fermi sea on this ring is unique"""
    counts = [count for count in range(lattice.L + 1) if is_closed_shell(lattice, count)]
    return [FillingSpec(N_up=n_up, N_down=n_down) for n_up in counts for n_down in counts]


# Fermi sea


def _slater_determinants(lattice: LatticeSpec, count: int) -> np.ndarray:
    """det M for every `count`-electron occupation mask, M[m][j] = exp(i k_j x_m)/sqrt(L)"""
    if count == 0:
        return np.ones(1, dtype=np.complex128)
    L = lattice.L
    occupied = occupied_momenta(lattice, count)
    orbitals = np.exp(1j * np.outer(np.arange(L), momentum_grid(lattice)[occupied])) / np.sqrt(L)
    masks = occupation_masks(L, count)
    sites = np.array([[site for site in range(L) if (mask >> site) & 1] for mask in masks], dtype=np.int64)
    return np.linalg.det(orbitals[sites])


def build_fermi_sea(lattice: LatticeSpec, filling: FillingSpec) -> ManyBodyState:
    """
    Closed-shell Fermi sea as a sector state

    Each amplitude is det(M_up) det(M_down), rows in ascending site order,
    which is the ascending-mode basis convention of sitemix.fockspace.

    Raises:
        OpenShellError: for a degenerate Fermi surface
    """
    filling.check(lattice)
    if lattice.L > app_settings.SITEMIX_MAX_SECTOR_SITES:
        raise FockSpaceError(f"Sector states are limited to {app_settings.SITEMIX_MAX_SECTOR_SITES} sites")
    up = _slater_determinants(lattice, filling.N_up)
    down = _slater_determinants(lattice, filling.N_down)
    state = from_amplitudes(lattice.L, np.outer(up, down).ravel(), sector=(filling.N_up, filling.N_down))
    logger.debug(
        f"[Oracle] Built Fermi sea L={lattice.L} ({lattice.boundary}), "
        f"N_up={filling.N_up}, N_down={filling.N_down}, dimension {state.dimension}"
    )
    return normalize(state)


# Gutzwiller projection


def _check_projection_amplitude(g: float) -> None:
    if not 0.0 <= g <= 1.0:
        raise ParameterDomainError(f"Projection amplitude g={g!r} outside [0, 1]")


def apply_gutzwiller(state: ManyBodyState, g: float) -> ManyBodyState:
    """
    Multiply each amplitude by g^D, D the number of doubly-occupied sites, and renormalize

    Raises:
        EmptyProjectionError: if nothing survives (g = 0 on a state living on D > 0 only)
    """
    _check_projection_amplitude(g)
    weights = np.power(float(g), double_counts(state))
    projected = state.amplitudes * weights
    if not np.any(projected):
        raise EmptyProjectionError(f"Gutzwiller projection with g={g!r} annihilates the state")
    return normalize(ManyBodyState(L=state.L, amplitudes=projected, configs=state.configs, sector=state.sector))


def projected_norm(state: ManyBodyState, g: float) -> float:
    """Squared norm sum |amp|^2 g^(2D) of the unnormalized projection"""
    weights = np.abs(state.amplitudes) ** 2
    return float(np.dot(weights, np.power(float(g), 2 * double_counts(state))))


def gutzwiller_d_via_normalization(lattice: LatticeSpec, filling: FillingSpec, g: float) -> float:
    """
    d = (1/2L) dlog N / dlog g by a centered finite difference in log g

    Raises:
        FiniteDifferenceError: for g below the finite-difference floor
    """
    if g < app_settings.SITEMIX_FD_MIN_G:
        raise FiniteDifferenceError(
            f"g={g!r} is below {app_settings.SITEMIX_FD_MIN_G!r}; the log-derivative is not stable there"
        )
    _check_projection_amplitude(g)
    sea = build_fermi_sea(lattice, filling)
    step = app_settings.SITEMIX_FD_RELATIVE_STEP
    upper = np.log(projected_norm(sea, g * np.exp(step)))
    lower = np.log(projected_norm(sea, g * np.exp(-step)))
    return float((upper - lower) / (2.0 * step) / (2.0 * lattice.L))


# BCS product state


def bcs_amplitudes(lattice: LatticeSpec, params: BcsParams) -> PairAmplitudes:
    """
    u_k, v_k on the ring band with the gap switched on inside the Debye shell

    |v_k|^2 = (1/2)(1 - xi/sqrt(xi^2 + Delta_k^2)), xi = E_k - E_F,
    Delta_k = Delta_0 for |xi| <= hbar omega_D, else 0. A gapless level within
    the shell-gap tolerance of E_F gets |v_k|^2 = 1/2.
    """
    momenta = momentum_grid(lattice)
    xi = band_energy(momenta) - params.e_f
    gap = np.where(np.abs(xi) <= params.omega_d, params.delta0, 0.0)
    scale = np.sqrt(xi**2 + gap**2)
    resolved = scale > app_settings.SITEMIX_SHELL_GAP
    safe_scale = np.where(resolved, scale, 1.0)
    v_squared = np.where(resolved, 0.5 * (1.0 - xi / safe_scale), 0.5)
    return PairAmplitudes(momenta=momenta, u=np.sqrt(1.0 - v_squared), v=np.sqrt(v_squared))


def _create_plane_wave(state: ManyBodyState, lattice: LatticeSpec, momentum: float, spin: str) -> ManyBodyState:
    """c+_{k,spin} = (1/sqrt L) sum_x exp(i k x) c+_{x,spin}"""
    phases = np.exp(1j * momentum * np.arange(lattice.L)) / np.sqrt(lattice.L)
    return superpose([apply_creation(state, site, spin) for site in range(lattice.L)], phases)


def build_bcs_from_amplitudes(lattice: LatticeSpec, u: np.ndarray, v: np.ndarray) -> ManyBodyState:
    """
    prod_k (u_k + v_k c+_{k,up} c+_{-k,down}) |0> in the full 4^L space

    Raises:
        FockSpaceError: if the ring is too large for a full-space state
    """
    if lattice.L > app_settings.SITEMIX_MAX_FULL_SPACE_SITES:
        raise FockSpaceError(
            f"BCS states need the full 4^L space; limited to {app_settings.SITEMIX_MAX_FULL_SPACE_SITES} sites"
        )
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (lattice.L,) or v.shape != (lattice.L,):
        raise ParameterDomainError(f"Need {lattice.L} pair amplitudes, got {u.shape} and {v.shape}")
    if np.max(np.abs(u**2 + v**2 - 1.0)) > 1e-12:
        raise ParameterDomainError("Pair amplitudes must satisfy u_k^2 + v_k^2 = 1")

    momenta = momentum_grid(lattice)
    partners = partner_indices(lattice)
    state = vacuum(lattice.L, sector=False)
    for index, momentum in enumerate(momenta):
        if v[index] == 0.0:
            continue
        pair = _create_plane_wave(state, lattice, momenta[partners[index]], constants.SPIN_DOWN)
        pair = _create_plane_wave(pair, lattice, momentum, constants.SPIN_UP)
        state = superpose([state, pair], [u[index], v[index]])

    logger.debug(f"[Oracle] Built BCS state on L={lattice.L} ({lattice.boundary})")
    return normalize(state)


def build_bcs(lattice: LatticeSpec, params: BcsParams) -> ManyBodyState:
    """
    Exact BCS product state for the ring band

    The density of the result follows from the band and E_F; params.n is
    not imposed. Compare against PairAmplitudes.density instead.
    """
    amplitudes = bcs_amplitudes(lattice, params)
    return build_bcs_from_amplitudes(lattice, amplitudes.u, amplitudes.v)


# Nagaoka multiplet


def lower_total_spin(state: ManyBodyState) -> ManyBodyState:
    """S- = sum_i c+_{i,down} c_{i,up}"""
    terms = [
        apply_creation(apply_annihilation(state, site, constants.SPIN_UP), site, constants.SPIN_DOWN)
        for site in range(state.L)
    ]
    return superpose(terms, np.ones(state.L))


def build_nagaoka_multiplet(L: int, l: int) -> ManyBodyState:
    """
    Member with N_down = l of the maximal-spin one-hole multiplet

    Starts from the fully polarized state with the hole spread uniformly
    over the ring and lowers the total spin l times.

    Raises:
        ParameterDomainError: if l is outside 0..L-1
    """
    params = NagaokaParams(N=L, l=l)
    state = from_amplitudes(L, np.full(L, 1.0 / np.sqrt(L)), sector=(L - 1, 0))
    for _ in range(params.l):
        state = normalize(lower_total_spin(state))
    logger.debug(f"[Oracle] Built Nagaoka multiplet member L={L}, l={l}, dimension {state.dimension}")
    return state
