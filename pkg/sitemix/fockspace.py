"""
Fock Space

Dense many-electron states on L <= 12 sites, fermionic operators and the
single-site partial trace.

Configuration index: (up_occ << L) | down_occ, so site i carries its up
electron on bit L + i and its down electron on bit i.

Mode ordering for signs: all up modes for sites 0..L-1, then all down modes
for sites 0..L-1. A basis configuration is the ascending product
c+_{m1} c+_{m2} ... c+_{mK} |0> with m1 < m2 < ... < mK in that ordering,
so applying c+_m or c_m picks up (-1)^(number of occupied modes before m).
"""

# Standard Library
import logging
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple

# Third Party
import numpy as np

# sitemix
from sitemix import app_settings, constants
from sitemix.models import FockConfig, ManyBodyState, SiteRDM

logger = logging.getLogger(__name__)


class FockSpaceError(ValueError):
    """Raised for invalid operations on Fock-space states"""

    pass


# Basis bookkeeping


@lru_cache(maxsize=None)
def _popcount_table(L: int) -> np.ndarray:
    table = np.zeros(1 << L, dtype=np.int64)
    values = np.arange(1 << L, dtype=np.int64)
    for bit in range(L):
        table += (values >> bit) & 1
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def occupation_masks(L: int, count: int) -> np.ndarray:
    masks = np.array(sorted(sum(1 << site for site in sites) for sites in combinations(range(L), count)), dtype=np.int64)
    masks.setflags(write=False)
    return masks


@lru_cache(maxsize=None)
def full_basis(L: int) -> np.ndarray:
    """Every configuration index of an L-site lattice, ascending"""
    _check_sites(L)
    configs = np.arange(4**L, dtype=np.int64)
    configs.setflags(write=False)
    return configs


@lru_cache(maxsize=None)
def sector_basis(L: int, n_up: int, n_down: int) -> np.ndarray:
    """Configuration indices with exactly (n_up, n_down) electrons, ascending"""
    _check_sites(L)
    if not (0 <= n_up <= L and 0 <= n_down <= L):
        raise FockSpaceError(f"Sector ({n_up}, {n_down}) does not exist on {L} sites")
    ups = occupation_masks(L, n_up)
    downs = occupation_masks(L, n_down)
    configs = ((ups[:, None] << L) | downs[None, :]).ravel()
    configs.setflags(write=False)
    return configs


def _check_sites(L: int) -> None:
    if not 1 <= L <= app_settings.SITEMIX_MAX_SITES:
        raise FockSpaceError(f"Lattice of {L} sites outside supported range 1..{app_settings.SITEMIX_MAX_SITES}")


def _check_site(state: ManyBodyState, site: int) -> None:
    if not 0 <= site < state.L:
        raise FockSpaceError(f"Site {site} out of range for a {state.L}-site lattice")


def _check_spin(spin: str) -> None:
    if spin not in dict(constants.SPIN_CHOICES):
        raise FockSpaceError(f"Unknown spin {spin!r}")


def split_occupations(configs: np.ndarray, L: int) -> Tuple[np.ndarray, np.ndarray]:
    """Up and down occupation bit-sets of each configuration index"""
    return configs >> L, configs & ((1 << L) - 1)


def double_counts(state: ManyBodyState) -> np.ndarray:
    """Number of doubly-occupied sites of each basis configuration"""
    up, down = split_occupations(state.configs, state.L)
    return _popcount_table(state.L)[up & down]


def _make_state(L: int, amplitudes: np.ndarray, sector: Optional[Tuple[int, int]]) -> ManyBodyState:
    configs = full_basis(L) if sector is None else sector_basis(L, *sector)
    return ManyBodyState(L=L, amplitudes=amplitudes, configs=configs, sector=sector)


# Constructors


def vacuum(L: int, sector: bool = True) -> ManyBodyState:
    """The empty lattice, as a (0, 0) sector state or in the full space"""
    if sector:
        return _make_state(L, np.ones(1), (0, 0))
    amplitudes = np.zeros(4**L, dtype=np.complex128)
    amplitudes[0] = 1.0
    return _make_state(L, amplitudes, None)


def basis_state(config: FockConfig, sector: bool = True) -> ManyBodyState:
    """A single configuration with amplitude one"""
    if sector:
        key = (config.n_up, config.n_down)
        configs = sector_basis(config.L, *key)
    else:
        key = None
        configs = full_basis(config.L)
    amplitudes = np.zeros(configs.shape[0], dtype=np.complex128)
    amplitudes[np.searchsorted(configs, config.index)] = 1.0
    return ManyBodyState(L=config.L, amplitudes=amplitudes, configs=configs, sector=key)


def fully_occupied(L: int) -> ManyBodyState:
    """Every site doubly occupied"""
    full = (1 << L) - 1
    return basis_state(FockConfig(up_occ=full, down_occ=full, L=L))


def random_state(L: int, rng: np.random.Generator, sector: Optional[Tuple[int, int]] = None) -> ManyBodyState:
    """Normalized state with independent complex Gaussian amplitudes"""
    configs = full_basis(L) if sector is None else sector_basis(L, *sector)
    amplitudes = rng.standard_normal(configs.shape[0]) + 1j * rng.standard_normal(configs.shape[0])
    return normalize(ManyBodyState(L=L, amplitudes=amplitudes, configs=configs, sector=sector))


def from_amplitudes(L: int, amplitudes: Sequence[complex], sector: Optional[Tuple[int, int]] = None) -> ManyBodyState:
    """Wrap an amplitude vector given in the ordering of the full space or of a sector"""
    return _make_state(L, np.asarray(amplitudes, dtype=np.complex128), sector)


# Linear algebra on states


def norm(state: ManyBodyState) -> float:
    return state.norm


def normalize(state: ManyBodyState) -> ManyBodyState:
    """
    Rescale to unit norm

    Raises:
        FockSpaceError: for the zero vector
    """
    current = state.norm
    if current == 0.0:
        raise FockSpaceError("Cannot normalize the zero vector")
    return ManyBodyState(L=state.L, amplitudes=state.amplitudes / current, configs=state.configs, sector=state.sector)


def require_normalized(state: ManyBodyState) -> None:
    deviation = abs(state.norm - 1.0)
    if deviation > app_settings.SITEMIX_NORM_TOLERANCE:
        raise FockSpaceError(f"State is not normalized (|norm - 1| = {deviation:.3e})")


def to_full_space(state: ManyBodyState) -> ManyBodyState:
    """Embed a sector state into the full 4^L amplitude vector"""
    if state.sector is None:
        return state
    amplitudes = np.zeros(4**state.L, dtype=np.complex128)
    amplitudes[state.configs] = state.amplitudes
    return _make_state(state.L, amplitudes, None)


def inner_product(bra: ManyBodyState, ket: ManyBodyState) -> complex:
    """<bra|ket> for states on the same lattice, whatever their bases"""
    if bra.L != ket.L:
        raise FockSpaceError(f"Cannot pair states on {bra.L} and {ket.L} sites")
    if bra.configs is ket.configs or (bra.sector == ket.sector and bra.dimension == ket.dimension):
        return complex(np.vdot(bra.amplitudes, ket.amplitudes))
    if bra.sector is not None and ket.sector is not None:
        return 0j
    _, bra_index, ket_index = np.intersect1d(bra.configs, ket.configs, assume_unique=True, return_indices=True)
    return complex(np.vdot(bra.amplitudes[bra_index], ket.amplitudes[ket_index]))


def superpose(states: Iterable[ManyBodyState], coefficients: Iterable[complex]) -> ManyBodyState:
    """Linear combination of states sharing a basis; mixed sector/full inputs are lifted to the full space"""
    states = list(states)
    coefficients = list(coefficients)
    if not states:
        raise FockSpaceError("Nothing to superpose")
    if len(states) != len(coefficients):
        raise FockSpaceError(f"{len(states)} states but {len(coefficients)} coefficients")
    L = states[0].L
    if any(state.L != L for state in states):
        raise FockSpaceError("Cannot superpose states on different lattices")
    sectors = {state.sector for state in states}
    if len(sectors) > 1:
        states = [to_full_space(state) for state in states]
        sector = None
    else:
        sector = sectors.pop()
    amplitudes = np.zeros(states[0].dimension, dtype=np.complex128)
    for state, coefficient in zip(states, coefficients):
        amplitudes += coefficient * state.amplitudes
    return _make_state(L, amplitudes, sector)


# Fermionic operators


def _mode_bit(L: int, site: int, spin: str) -> int:
    return L + site if spin == constants.SPIN_UP else site


def _preceding_occupations(state: ManyBodyState, site: int, spin: str) -> np.ndarray:
    popcount = _popcount_table(state.L)
    up, down = split_occupations(state.configs, state.L)
    below = (1 << site) - 1
    if spin == constants.SPIN_UP:
        return popcount[up & below]
    return popcount[up] + popcount[down & below]


def _apply_mode(state: ManyBodyState, site: int, spin: str, create: bool) -> ManyBodyState:
    _check_site(state, site)
    _check_spin(spin)
    L = state.L
    bit = 1 << _mode_bit(L, site, spin)
    occupied = (state.configs & bit) != 0
    allowed = ~occupied if create else occupied
    signs = 1 - 2 * (_preceding_occupations(state, site, spin) & 1)
    targets = (state.configs ^ bit)[allowed]
    values = (state.amplitudes * signs)[allowed]

    if state.sector is None:
        amplitudes = np.zeros(state.dimension, dtype=np.complex128)
        amplitudes[targets] = values
        return _make_state(L, amplitudes, None)

    n_up, n_down = state.sector
    step = 1 if create else -1
    sector = (n_up + step, n_down) if spin == constants.SPIN_UP else (n_up, n_down + step)
    if not (0 <= sector[0] <= L and 0 <= sector[1] <= L):
        # every configuration was blocked; the zero vector is kept in the input sector
        return _make_state(L, np.zeros(state.dimension, dtype=np.complex128), state.sector)
    configs = sector_basis(L, *sector)
    amplitudes = np.zeros(configs.shape[0], dtype=np.complex128)
    amplitudes[np.searchsorted(configs, targets)] = values
    return ManyBodyState(L=L, amplitudes=amplitudes, configs=configs, sector=sector)


def apply_creation(state: ManyBodyState, site: int, spin: str) -> ManyBodyState:
    """
    Apply c+_{site,spin}

    Raises:
        FockSpaceError: if the site is out of range
    """
    return _apply_mode(state, site, spin, create=True)


def apply_annihilation(state: ManyBodyState, site: int, spin: str) -> ManyBodyState:
    """
    Apply c_{site,spin}, the adjoint of apply_creation

    Raises:
        FockSpaceError: if the site is out of range
    """
    return _apply_mode(state, site, spin, create=False)


def apply_number(state: ManyBodyState, site: int, spin: str) -> ManyBodyState:
    """Apply n_{site,spin} = c+ c"""
    return apply_creation(apply_annihilation(state, site, spin), site, spin)


def expectation_number(state: ManyBodyState, site: int, spin: str) -> float:
    """<n_{site,spin}> of a normalized state"""
    _check_site(state, site)
    _check_spin(spin)
    bit = 1 << _mode_bit(state.L, site, spin)
    occupied = (state.configs & bit) != 0
    return float(np.sum(np.abs(state.amplitudes[occupied]) ** 2))


# Local (single-site) operators. Each local state is built from the empty
# site by a creation string: double = c+_up c+_down.
_LOCAL_CREATIONS = {
    constants.HOLE: (),
    constants.DOUBLE: (constants.SPIN_UP, constants.SPIN_DOWN),
    constants.UP: (constants.SPIN_UP,),
    constants.DOWN: (constants.SPIN_DOWN,),
}


def _project_empty(state: ManyBodyState, site: int) -> ManyBodyState:
    mask = (1 << _mode_bit(state.L, site, constants.SPIN_UP)) | (1 << _mode_bit(state.L, site, constants.SPIN_DOWN))
    amplitudes = np.where((state.configs & mask) == 0, state.amplitudes, 0.0)
    return ManyBodyState(L=state.L, amplitudes=amplitudes, configs=state.configs, sector=state.sector)


def apply_transition(state: ManyBodyState, site: int, target: int, source: int) -> ManyBodyState:
    """Apply the local operator |target><source| on one site (indices in LOCAL_BASIS order)"""
    _check_site(state, site)
    result = state
    # <source| = (creation string)^dagger: annihilate in reverse order
    for spin in _LOCAL_CREATIONS[source]:
        result = apply_annihilation(result, site, spin)
    result = _project_empty(result, site)
    for spin in reversed(_LOCAL_CREATIONS[target]):
        result = apply_creation(result, site, spin)
    return result


def _local_probabilities(state: ManyBodyState, site: int) -> np.ndarray:
    up, down = split_occupations(state.configs, state.L)
    up_bit = (up >> site) & 1
    down_bit = (down >> site) & 1
    weights = np.abs(state.amplitudes) ** 2
    probabilities = np.empty(4)
    probabilities[constants.HOLE] = np.sum(weights[(up_bit == 0) & (down_bit == 0)])
    probabilities[constants.DOUBLE] = np.sum(weights[(up_bit == 1) & (down_bit == 1)])
    probabilities[constants.UP] = np.sum(weights[(up_bit == 1) & (down_bit == 0)])
    probabilities[constants.DOWN] = np.sum(weights[(up_bit == 0) & (down_bit == 1)])
    return probabilities


def single_site_rdm(state: ManyBodyState, site: int) -> SiteRDM:
    """
    Trace out every site but one.

    rho[a][b] = <psi| (|b><a|)_site |psi>, evaluated with the fermionic
    operators above so reordering signs are included. Sector states
    conserve both spin numbers, so only the diagonal survives and it is
    read off from the configuration weights.

    Raises:
        FockSpaceError: for unnormalized input or a bad site
    """
    _check_site(state, site)
    require_normalized(state)
    entries = np.diag(_local_probabilities(state, site)).astype(np.complex128)
    if state.sector is None:
        for a in range(4):
            for b in range(4):
                if a != b:
                    entries[a, b] = inner_product(state, apply_transition(state, site, target=b, source=a))
    return SiteRDM(entries=entries)


def site_rdm_array(state: ManyBodyState, site: int) -> np.ndarray:
    """Single-site RDM as a plain (writable) numpy array"""
    return np.array(single_site_rdm(state, site).entries)


def measure_double_occupancy(state: ManyBodyState) -> float:
    """(1/L) sum_i <n_i,up n_i,down>"""
    require_normalized(state)
    weights = np.abs(state.amplitudes) ** 2
    return float(np.dot(weights, double_counts(state)) / state.L)


def measure_pairing(state: ManyBodyState, site: int) -> complex:
    """On-site pairing amplitude <c_{site,down} c_{site,up}>"""
    _check_site(state, site)
    require_normalized(state)
    if state.sector is not None:
        return 0j
    paired = apply_annihilation(apply_annihilation(state, site, constants.SPIN_UP), site, constants.SPIN_DOWN)
    return inner_product(state, paired)


def global_epsilon(state: ManyBodyState) -> float:
    """Site-averaged mixedness (4/3L) sum_l (1 - Tr rho_l^2)"""
    purities = [single_site_rdm(state, site).purity for site in range(state.L)]
    epsilon = 4.0 / (3.0 * state.L) * float(np.sum(1.0 - np.asarray(purities)))
    logger.debug(f"[Fock] Global entanglement over {state.L} sites: {epsilon!r}")
    return epsilon
