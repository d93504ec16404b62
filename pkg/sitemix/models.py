"""
Domain Models
"""

# Standard Library
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

# Third Party
import numpy as np
from scipy import linalg

# sitemix
from sitemix import app_settings, constants


class ParameterDomainError(ValueError):
    """Raised when a parameter bundle leaves its physical domain"""

    pass


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FockConfig:
    """One basis configuration of L sites, stored as two occupation bit-sets"""

    up_occ: int
    down_occ: int
    L: int

    def __post_init__(self):
        if not 1 <= self.L <= app_settings.SITEMIX_MAX_SITES:
            raise ParameterDomainError(f"Site count L={self.L} outside 1..{app_settings.SITEMIX_MAX_SITES}")
        limit = 1 << self.L
        if not (0 <= self.up_occ < limit and 0 <= self.down_occ < limit):
            raise ParameterDomainError(f"Occupation bits beyond site {self.L - 1}")

    @property
    def index(self) -> int:
        """Position in the configuration ordering: the integer (up_occ, down_occ)"""
        return (self.up_occ << self.L) | self.down_occ

    @classmethod
    def from_index(cls, index: int, L: int) -> "FockConfig":
        return cls(up_occ=index >> L, down_occ=index & ((1 << L) - 1), L=L)

    @classmethod
    def from_labels(cls, labels) -> "FockConfig":
        """Build from per-site labels such as ("up", "hole", "double")"""
        up_occ = 0
        down_occ = 0
        for site, label in enumerate(labels):
            if label not in constants.LOCAL_BASIS:
                raise ParameterDomainError(f"Unknown local state {label!r}")
            if label in (constants.LOCAL_UP, constants.LOCAL_DOUBLE):
                up_occ |= 1 << site
            if label in (constants.LOCAL_DOWN, constants.LOCAL_DOUBLE):
                down_occ |= 1 << site
        return cls(up_occ=up_occ, down_occ=down_occ, L=len(labels))

    def local_state(self, site: int) -> str:
        up = (self.up_occ >> site) & 1
        down = (self.down_occ >> site) & 1
        if up and down:
            return constants.LOCAL_DOUBLE
        if up:
            return constants.LOCAL_UP
        if down:
            return constants.LOCAL_DOWN
        return constants.LOCAL_HOLE

    @property
    def n_up(self) -> int:
        return bin(self.up_occ).count("1")

    @property
    def n_down(self) -> int:
        return bin(self.down_occ).count("1")

    @property
    def doubles(self) -> int:
        return bin(self.up_occ & self.down_occ).count("1")

    def __str__(self):
        symbols = {
            constants.LOCAL_HOLE: "0",
            constants.LOCAL_DOUBLE: "2",
            constants.LOCAL_UP: "u",
            constants.LOCAL_DOWN: "d",
        }
        return "|" + ",".join(symbols[self.local_state(site)] for site in range(self.L)) + ">"


@dataclass(frozen=True, eq=False)
class ManyBodyState:
    """
    Amplitude vector over an ordered set of Fock configurations.

    `configs` holds the configuration indices (see FockConfig.index) in
    ascending order: all 4^L of them for a full-space state, or the
    configurations of one (N_up, N_down) sector when `sector` is set.
    Both arrays are read-only.
    """

    L: int
    amplitudes: np.ndarray
    configs: np.ndarray
    sector: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if not 1 <= self.L <= app_settings.SITEMIX_MAX_SITES:
            raise ParameterDomainError(f"Site count L={self.L} outside 1..{app_settings.SITEMIX_MAX_SITES}")
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        configs = np.asarray(self.configs, dtype=np.int64)
        if amplitudes.shape != configs.shape or amplitudes.ndim != 1:
            raise ParameterDomainError(f"Amplitude shape {amplitudes.shape} does not match basis shape {configs.shape}")
        object.__setattr__(self, "amplitudes", _freeze(amplitudes))
        object.__setattr__(self, "configs", _freeze(configs))

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, config: FockConfig) -> complex:
        """Amplitude of one configuration (zero when it lies outside the basis)"""
        position = np.searchsorted(self.configs, config.index)
        if position < self.dimension and self.configs[position] == config.index:
            return complex(self.amplitudes[position])
        return 0j

    def support(self, tolerance: float = 0.0):
        """Configurations carrying amplitude above `tolerance`"""
        mask = np.abs(self.amplitudes) > tolerance
        return [FockConfig.from_index(int(index), self.L) for index in self.configs[mask]]


@dataclass(frozen=True, eq=False)
class SiteRDM:
    """4x4 single-site reduced density matrix in the (hole, double, up, down) basis"""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.shape != (4, 4):
            raise ParameterDomainError(f"Site RDM must be 4x4, got {entries.shape}")
        object.__setattr__(self, "entries", _freeze(entries))

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    @property
    def purity(self) -> float:
        """Tr rho^2"""
        return float(np.sum(np.abs(self.entries) ** 2))

    @property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues of the Hermitian part"""
        return linalg.eigvalsh(0.5 * (self.entries + self.entries.conj().T))

    @property
    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def validate(self, tolerance: Optional[float] = None) -> None:
        """
        Check Hermiticity, unit trace and positivity

        Raises:
            ParameterDomainError: naming the first violated condition
        """
        tolerance = app_settings.SITEMIX_MATRIX_TOLERANCE if tolerance is None else tolerance
        if self.hermiticity_error() > tolerance:
            raise ParameterDomainError(f"Site RDM is not Hermitian (deviation {self.hermiticity_error():.3e})")
        if abs(self.trace - 1.0) > tolerance:
            raise ParameterDomainError(f"Site RDM trace is {self.trace!r}, expected 1")
        smallest = float(self.eigenvalues[0])
        if smallest < -tolerance:
            raise ParameterDomainError(f"Site RDM is not positive semidefinite (eigenvalue {smallest:.3e})")


@dataclass(frozen=True)
class DensityParams:
    """Macroscopic densities that fix the analytic single-site RDM"""

    n: float
    n_up: float
    n_down: float
    d: float
    zeta: float = 0.0

    def __post_init__(self):
        self.validate()

    @classmethod
    def unpolarized(cls, n: float, d: float, zeta: float = 0.0) -> "DensityParams":
        return cls(n=n, n_up=n / 2, n_down=n / 2, d=d, zeta=zeta)

    @property
    def eigenvalue_conditions(self) -> Mapping[str, float]:
        """Diagonal entries of the RDM, which must all be nonnegative"""
        return {
            "hole weight 1-n+d": 1.0 - self.n + self.d,
            "double occupancy d": self.d,
            "up-only weight n_up-d": self.n_up - self.d,
            "down-only weight n_down-d": self.n_down - self.d,
        }

    def validate(self, tolerance: float = 1e-12) -> None:
        if not 0.0 <= self.n <= 1.0 + tolerance:
            raise ParameterDomainError(f"Electron density n={self.n!r} outside [0, 1]")
        if self.n_up < -tolerance or self.n_down < -tolerance:
            raise ParameterDomainError(f"Spin densities must be nonnegative (n_up={self.n_up!r}, n_down={self.n_down!r})")
        if abs(self.n_up + self.n_down - self.n) > tolerance:
            raise ParameterDomainError(f"n_up + n_down = {self.n_up + self.n_down!r} differs from n={self.n!r}")
        for name, value in self.eigenvalue_conditions.items():
            if value < -tolerance:
                raise ParameterDomainError(f"Negative RDM eigenvalue: {name} = {value!r}")
        if self.zeta < 0.0:
            raise ParameterDomainError(f"Pairing amplitude zeta={self.zeta!r} must be nonnegative")
        if self.zeta > 0.0:
            block_det = self.d * (1.0 - self.n + self.d)
            if self.zeta**2 > block_det + tolerance:
                raise ParameterDomainError(
                    f"Hole/double block not positive semidefinite: zeta^2={self.zeta ** 2!r} > d(1-n+d)={block_det!r}"
                )


@dataclass(frozen=True)
class BcsParams:
    """Gap, Debye window and density of the narrow-shell BCS state"""

    n: float
    delta0: float
    omega_d: float
    e_f: float = field(default_factory=lambda: app_settings.SITEMIX_FERMI_ENERGY)

    def __post_init__(self):
        if not 0.0 < self.n <= 1.0:
            raise ParameterDomainError(f"Electron density n={self.n!r} outside (0, 1]")
        if self.delta0 < 0.0 or not math.isfinite(self.delta0):
            raise ParameterDomainError(f"Gap delta0={self.delta0!r} must be finite and nonnegative")
        if self.omega_d <= 0.0:
            raise ParameterDomainError(f"Debye energy omega_d={self.omega_d!r} must be positive")
        if self.e_f <= 0.0:
            raise ParameterDomainError(f"Fermi energy e_f={self.e_f!r} must be positive")

    @classmethod
    def from_ratios(cls, n: float, omega_ef: float, delta_ratio: float, e_f: Optional[float] = None) -> "BcsParams":
        """Build from the dimensionless ratios hbar*omega_D/E_F and Delta_0/(hbar*omega_D)"""
        e_f = app_settings.SITEMIX_FERMI_ENERGY if e_f is None else e_f
        omega_d = omega_ef * e_f
        return cls(n=n, delta0=delta_ratio * omega_d, omega_d=omega_d, e_f=e_f)

    @property
    def omega_ef(self) -> float:
        return self.omega_d / self.e_f

    @property
    def delta_ratio(self) -> float:
        return self.delta0 / self.omega_d


@dataclass(frozen=True)
class NagaokaParams:
    """Member of the maximal-spin one-hole multiplet: N sites, l down spins"""

    N: int
    l: int

    def __post_init__(self):
        if self.N < 2:
            raise ParameterDomainError(f"Nagaoka state needs N >= 2 sites, got {self.N}")
        if not 0 <= self.l <= self.N - 1:
            raise ParameterDomainError(f"Down-spin count l={self.l} outside 0..{self.N - 1}")

    @property
    def n_electrons(self) -> int:
        return self.N - 1

    @property
    def n_up(self) -> int:
        return self.N - 1 - self.l

    @property
    def n_down(self) -> int:
        return self.l


@dataclass(frozen=True)
class LatticeSpec:
    """A 1-D ring of L sites"""

    L: int
    boundary: str = constants.BOUNDARY_ANTIPERIODIC

    def __post_init__(self):
        if not 2 <= self.L <= app_settings.SITEMIX_MAX_SITES:
            raise ParameterDomainError(f"Ring length L={self.L} outside 2..{app_settings.SITEMIX_MAX_SITES}")
        if self.boundary not in dict(constants.BOUNDARY_CHOICES):
            raise ParameterDomainError(f"Unknown boundary condition {self.boundary!r}")

    @property
    def twist(self) -> float:
        return 0.5 if self.boundary == constants.BOUNDARY_ANTIPERIODIC else 0.0

    @classmethod
    def half_filled(cls, L: int) -> "LatticeSpec":
        """Ring whose half-filled Fermi sea is a closed shell"""
        if L % 2:
            raise ParameterDomainError(f"Half filling needs an even ring, got L={L}")
        boundary = constants.BOUNDARY_ANTIPERIODIC if (L // 2) % 2 == 0 else constants.BOUNDARY_PERIODIC
        return cls(L=L, boundary=boundary)


@dataclass(frozen=True)
class FillingSpec:
    """Particle numbers of a number-conserving state"""

    N_up: int
    N_down: int

    def check(self, lattice: LatticeSpec) -> None:
        for label, count in (("N_up", self.N_up), ("N_down", self.N_down)):
            if not 0 <= count <= lattice.L:
                raise ParameterDomainError(f"{label}={count} outside 0..{lattice.L}")

    @property
    def n_electrons(self) -> int:
        return self.N_up + self.N_down


@dataclass(frozen=True)
class SweepSpec:
    """
    Declarative 1-D sweep

    `fixed` maps parameter names to tuples of curve values. Lists of
    different lengths are paired elementwise after broadcasting
    length-one lists, so n=(1, 0.5) with omega_ef=(0.1,) gives two curves.
    """

    family: str
    grid: Tuple[float, float, int]
    fixed: Mapping[str, Tuple[float, ...]]
    output: Optional[str] = None
    format: str = constants.FORMAT_CSV

    def __post_init__(self):
        if self.family not in dict(constants.SWEEP_FAMILY_CHOICES):
            raise ParameterDomainError(f"Unknown sweep family {self.family!r}")
        low, high, steps = self.grid
        if not low < high:
            raise ParameterDomainError(f"Sweep grid needs min < max, got [{low!r}, {high!r}]")
        if int(steps) != steps or steps < 2:
            raise ParameterDomainError(f"Sweep grid needs at least 2 integer steps, got {steps!r}")
        if self.format not in constants.FORMAT_DELIMITERS:
            raise ParameterDomainError(f"Unknown output format {self.format!r}")
        object.__setattr__(self, "fixed", {name: tuple(values) for name, values in self.fixed.items()})

    @property
    def variable(self) -> str:
        return constants.SWEEP_VARIABLE[self.family]

    def grid_values(self) -> np.ndarray:
        low, high, steps = self.grid
        return np.linspace(low, high, int(steps))

    def curves(self, *names: str):
        """Per-curve parameter dicts for the requested fixed names"""
        columns = []
        for name in names:
            values = self.fixed.get(name)
            if not values:
                raise ParameterDomainError(f"Sweep family {self.family!r} needs fixed parameter {name!r}")
            columns.append(values)
        length = max(len(values) for values in columns)
        for name, values in zip(names, columns):
            if len(values) not in (1, length):
                raise ParameterDomainError(f"Fixed parameter {name!r} has {len(values)} values, expected 1 or {length}")
        return [
            {name: values[0] if len(values) == 1 else values[index] for name, values in zip(names, columns)}
            for index in range(length)
        ]
