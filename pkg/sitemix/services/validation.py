"""
Validation Service

Runs every structural invariant of the Fock-space layer, the closed forms and
the oracle against each other, and reports the worst deviation per check.
"""

# Standard Library
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Tuple

# Third Party
import numpy as np

# sitemix
from sitemix import analytic, app_settings, constants, fockspace
from sitemix.models import BcsParams, DensityParams, FillingSpec, LatticeSpec, NagaokaParams, ParameterDomainError
from sitemix.services import oracle

logger = logging.getLogger(__name__)

# Parameter sets of the published gap sweeps, as (n, hbar omega_D / E_F)
ENTANGLEMENT_CURVES = ((1.0, 0.1), (1.0, 0.2), (0.5, 0.1), (0.5, 0.2))
CONCURRENCE_CURVES = ((1.0, 0.5), (0.75, 0.5), (1.0, 0.75), (0.75, 0.75))

GUTZWILLER_REFERENCE_D = 0.1413988  # d(g=0.5, n=1)
FINITE_SIZE_LATTICES = (4, 6, 8, 10)
PROJECTION_AMPLITUDES = (0.25, 0.5, 0.75)
BCS_LATTICES = (4, 6, 8)


class ValidationFailure(RuntimeError):
    """Raised when one or more invariant checks fail"""

    pass


@dataclass
class CheckResult:
    """Outcome of one invariant check"""

    name: str
    tolerance: float
    worst: float = 0.0
    cases: int = 0
    error: str = ""

    def record(self, deviation: float) -> None:
        self.cases += 1
        if math.isnan(deviation) or deviation > self.worst:
            self.worst = deviation

    @property
    def passed(self) -> bool:
        return not self.error and not math.isnan(self.worst) and self.worst <= self.tolerance


@dataclass
class ValidationReport:
    """Ordered list of check outcomes"""

    max_L: int
    seed: int
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]

    def rows(self) -> Iterator[Tuple[str, ...]]:
        yield ("check", "status", "tolerance", "worst_deviation", "cases")
        for result in self.results:
            status = "PASS" if result.passed else "FAIL"
            yield (result.name, status, f"{result.tolerance:.1e}", f"{result.worst:.3e}", str(result.cases))

    def render(self, fmt: str = constants.FORMAT_CSV) -> str:
        delimiter = constants.FORMAT_DELIMITERS[fmt]
        return "".join(delimiter.join(row) + "\n" for row in self.rows())

    def raise_for_failures(self) -> None:
        if self.failures:
            names = ", ".join(result.name for result in self.failures)
            raise ValidationFailure(f"Failed checks: {names}")


# Random parameter bundles


def random_density_params(rng: np.random.Generator, margin: float = 0.0) -> DensityParams:
    """
    Uniformly drawn valid bundle; `margin` keeps every RDM eigenvalue and the
    pairing block away from the edge of the domain by that fraction
    """
    n = rng.uniform(0.05, 1.0)
    n_up = rng.uniform(margin, 1.0 - margin) * n
    n_down = n - n_up
    d = rng.uniform(margin, 1.0 - margin) * min(n_up, n_down)
    zeta = rng.uniform(margin, 1.0 - margin) * math.sqrt(d * (1.0 - n + d))
    return DensityParams(n=n, n_up=n_up, n_down=n_down, d=d, zeta=zeta)


def random_pairing_params(rng: np.random.Generator, margin: float = 0.1) -> DensityParams:
    """Unpolarized bundle as produced by a paired state, kept off the rank-deficient edge"""
    n = rng.uniform(0.1, 1.0)
    d = rng.uniform(margin, 1.0 - margin) * n / 2.0
    zeta = rng.uniform(margin, 1.0 - margin) * math.sqrt(d * (1.0 - n + d))
    return DensityParams.unpolarized(n=n, d=d, zeta=zeta)


class ValidationSuite:
    """All invariant checks, each a method returning a CheckResult"""

    def __init__(self, max_L: int, seed: int):
        if not 2 <= max_L <= app_settings.SITEMIX_MAX_SECTOR_SITES:
            raise ParameterDomainError(f"max_L={max_L} outside 2..{app_settings.SITEMIX_MAX_SECTOR_SITES}")
        self.max_L = max_L
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self._bcs_cache = None

    def checks(self) -> List[Callable[[], CheckResult]]:
        return [
            self.check_anticommutation,
            self.check_rdm_trace,
            self.check_rdm_hermiticity,
            self.check_rdm_positivity,
            self.check_superselection,
            self.check_translation_invariance,
            self.check_class_maxima,
            self.check_class_ceilings,
            self.check_epsilon_range,
            self.check_gutzwiller_monotonicity,
            self.check_gutzwiller_unit_limit,
            self.check_gutzwiller_endpoints,
            self.check_gutzwiller_reference_value,
            self.check_fermi_sea_wick,
            self.check_half_filled_entanglement,
            self.check_projection_preserves_sector,
            self.check_normalization_derivative,
            self.check_finite_size_trend,
            self.check_bcs_pairing_sum_rule,
            self.check_bcs_double_occupancy,
            self.check_bcs_epsilon_pipeline,
            self.check_bcs_reference_value,
            self.check_bcs_monotonicity,
            self.check_bcs_normal_state,
            self.check_concurrence_onset,
            self.check_wootters_equivalence,
            self.check_nagaoka_discrepancy,
            self.check_nagaoka_oracle,
        ]

    def run(self) -> ValidationReport:
        report = ValidationReport(max_L=self.max_L, seed=self.seed)
        for check in self.checks():
            name = check.__name__[len("check_") :]
            try:
                result = check()
            except Exception as e:  # a crashing check is a failing check
                logger.error(f"[Validate] Check {name} raised {type(e).__name__}: {e}")
                result = CheckResult(name=name, tolerance=0.0, worst=float("nan"), error=str(e))
            result.name = name
            level = logging.INFO if result.passed else logging.ERROR
            logger.log(level, f"[Validate] {name}: worst {result.worst:.3e} (tolerance {result.tolerance:.1e})")
            report.results.append(result)
        return report

    # Fock-space layer

    def _random_states(self, full_limit: int = 3, sector_limit: int = 6):
        for L in range(1, min(self.max_L, full_limit) + 1):
            yield fockspace.random_state(L, self.rng)
        for L in range(2, min(self.max_L, sector_limit) + 1):
            yield fockspace.random_state(L, self.rng, sector=(L // 2, (L + 1) // 2))
            yield fockspace.random_state(L, self.rng, sector=(1, L - 1))

    def check_anticommutation(self) -> CheckResult:
        result = CheckResult(name="anticommutation", tolerance=1e-12)
        for L in range(1, min(self.max_L, 3) + 1):
            state = fockspace.random_state(L, self.rng)
            modes = [(site, spin) for spin in (constants.SPIN_UP, constants.SPIN_DOWN) for site in range(L)]
            for a in modes:
                for b in modes:
                    mixed = (
                        fockspace.apply_annihilation(fockspace.apply_creation(state, *b), *a).amplitudes
                        + fockspace.apply_creation(fockspace.apply_annihilation(state, *a), *b).amplitudes
                    )
                    expected = state.amplitudes if a == b else 0.0
                    result.record(float(np.max(np.abs(mixed - expected))))
                    pure = (
                        fockspace.apply_annihilation(fockspace.apply_annihilation(state, *b), *a).amplitudes
                        + fockspace.apply_annihilation(fockspace.apply_annihilation(state, *a), *b).amplitudes
                    )
                    result.record(float(np.max(np.abs(pure))))
        return result

    def _rdms(self):
        for state in self._random_states():
            for site in range(state.L):
                yield fockspace.single_site_rdm(state, site)

    def check_rdm_trace(self) -> CheckResult:
        result = CheckResult(name="rdm_trace", tolerance=1e-12)
        for rdm in self._rdms():
            result.record(abs(rdm.trace - 1.0))
        return result

    def check_rdm_hermiticity(self) -> CheckResult:
        result = CheckResult(name="rdm_hermiticity", tolerance=1e-12)
        for rdm in self._rdms():
            result.record(rdm.hermiticity_error())
        return result

    def check_rdm_positivity(self) -> CheckResult:
        result = CheckResult(name="rdm_positivity", tolerance=1e-10)
        for rdm in self._rdms():
            result.record(max(0.0, -float(rdm.eigenvalues[0])))
        return result

    def check_superselection(self) -> CheckResult:
        result = CheckResult(name="superselection", tolerance=1e-14)
        for L in range(2, min(self.max_L, 4) + 1):
            state = fockspace.to_full_space(fockspace.random_state(L, self.rng, sector=(1, L // 2)))
            for site in range(L):
                entries = fockspace.single_site_rdm(state, site).entries
                result.record(float(np.max(np.abs(entries - np.diag(np.diag(entries))))))
        return result

    def check_translation_invariance(self) -> CheckResult:
        result = CheckResult(name="translation_invariance", tolerance=1e-12)
        for L in range(2, self.max_L + 1, 2):
            lattice = LatticeSpec.half_filled(L)
            sea = oracle.build_fermi_sea(lattice, FillingSpec(N_up=L // 2, N_down=L // 2))
            reference = fockspace.single_site_rdm(sea, 0).entries
            for site in range(1, L):
                result.record(float(np.max(np.abs(fockspace.single_site_rdm(sea, site).entries - reference))))
        return result

    # Closed forms

    def check_class_maxima(self) -> CheckResult:
        result = CheckResult(name="class_maxima", tolerance=1e-15)
        expected = {
            constants.CLASS_SPIN_ONLY: 2.0 / 3.0,
            constants.CLASS_WITH_HOLES: 8.0 / 9.0,
            constants.CLASS_FULL: 1.0,
        }
        for kind, value in expected.items():
            result.record(abs(analytic.class_maximum(kind) - value))
        return result

    def check_class_ceilings(self) -> CheckResult:
        result = CheckResult(name="class_ceilings", tolerance=1e-12)
        for _ in range(app_settings.SITEMIX_VALIDATION_SAMPLES):
            n_up = self.rng.uniform(0.0, 1.0)
            spin_only = DensityParams(n=1.0, n_up=n_up, n_down=1.0 - n_up, d=0.0)
            result.record(max(0.0, analytic.epsilon(analytic.site_rdm(spin_only)) - 2.0 / 3.0))
            n = self.rng.uniform(0.0, 1.0)
            n_up = self.rng.uniform(0.0, 1.0) * n
            with_holes = DensityParams(n=n, n_up=n_up, n_down=n - n_up, d=0.0)
            result.record(max(0.0, analytic.epsilon(analytic.site_rdm(with_holes)) - 8.0 / 9.0))
        return result

    def check_epsilon_range(self) -> CheckResult:
        result = CheckResult(name="epsilon_range", tolerance=1e-12)
        for _ in range(app_settings.SITEMIX_VALIDATION_SAMPLES):
            value = analytic.epsilon(analytic.site_rdm(random_density_params(self.rng)))
            result.record(max(0.0, -value, value - 1.0))
        return result

    def check_gutzwiller_monotonicity(self) -> CheckResult:
        result = CheckResult(name="gutzwiller_monotonicity", tolerance=1e-15)
        grid = np.linspace(0.0, 1.0, 1001)
        for n in np.linspace(0.05, 1.0, 20):
            values = np.array([analytic.gutzwiller_d(g, n) for g in grid])
            result.record(max(0.0, float(-np.min(np.diff(values)))))
        return result

    def check_gutzwiller_unit_limit(self) -> CheckResult:
        result = CheckResult(name="gutzwiller_unit_limit", tolerance=1e-7)
        for n in (0.25, 0.5, 0.75, 1.0):
            deviations = [abs(analytic.gutzwiller_d(1.0 - 10.0**-k, n) - n * n / 4.0) for k in range(1, 9)]
            if any(later > earlier for earlier, later in zip(deviations, deviations[1:])):
                result.record(float("inf"))
            result.record(deviations[-1])
        return result

    def check_gutzwiller_endpoints(self) -> CheckResult:
        result = CheckResult(name="gutzwiller_endpoints", tolerance=1e-12)
        result.record(abs(analytic.gutzwiller_epsilon(1.0, 1.0) - 1.0))
        result.record(abs(analytic.gutzwiller_epsilon(0.0, 1.0) - 2.0 / 3.0))
        low_g = analytic.gutzwiller_epsilon(0.0, 0.25)
        high_g = analytic.gutzwiller_epsilon(1.0, 0.25)
        result.record(abs(low_g - 13.0 / 24.0))
        result.record(abs(high_g - 0.51953125))
        # dilute inversion: the projected end lies above the metallic end
        result.record(0.0 if low_g > high_g else float("inf"))
        return result

    def check_gutzwiller_reference_value(self) -> CheckResult:
        result = CheckResult(name="gutzwiller_reference_value", tolerance=1e-7)
        result.record(abs(analytic.gutzwiller_d(0.5, 1.0) - GUTZWILLER_REFERENCE_D))
        return result

    # Oracle against closed forms

    def check_fermi_sea_wick(self) -> CheckResult:
        result = CheckResult(name="fermi_sea_wick", tolerance=1e-12)
        for L in range(2, self.max_L + 1):
            for boundary, _ in constants.BOUNDARY_CHOICES:
                lattice = LatticeSpec(L=L, boundary=boundary)
                for filling in oracle.closed_shell_fillings(lattice):
                    sea = oracle.build_fermi_sea(lattice, filling)
                    expected = filling.N_up * filling.N_down / L**2
                    result.record(abs(fockspace.measure_double_occupancy(sea) - expected))
        return result

    def check_half_filled_entanglement(self) -> CheckResult:
        result = CheckResult(name="half_filled_entanglement", tolerance=1e-12)
        for L in range(2, self.max_L + 1, 2):
            sea = oracle.build_fermi_sea(LatticeSpec.half_filled(L), FillingSpec(N_up=L // 2, N_down=L // 2))
            result.record(abs(fockspace.global_epsilon(sea) - 1.0))
        return result

    def check_projection_preserves_sector(self) -> CheckResult:
        result = CheckResult(name="projection_preserves_sector", tolerance=0.0)
        for L in range(2, min(self.max_L, 6) + 1, 2):
            lattice = LatticeSpec.half_filled(L)
            filling = FillingSpec(N_up=L // 2, N_down=L // 2)
            sea = fockspace.to_full_space(oracle.build_fermi_sea(lattice, filling))
            for g in PROJECTION_AMPLITUDES:
                projected = oracle.apply_gutzwiller(sea, g)
                up, down = fockspace.split_occupations(projected.configs, L)
                table = np.array([bin(mask).count("1") for mask in range(1 << L)])
                outside = (table[up] != filling.N_up) | (table[down] != filling.N_down)
                result.record(float(np.max(np.abs(projected.amplitudes[outside]), initial=0.0)))
        return result

    def check_normalization_derivative(self) -> CheckResult:
        result = CheckResult(name="normalization_derivative", tolerance=1e-6)
        for L in (L for L in (4, 6, 8) if L <= self.max_L):
            lattice = LatticeSpec.half_filled(L)
            filling = FillingSpec(N_up=L // 2, N_down=L // 2)
            sea = oracle.build_fermi_sea(lattice, filling)
            for g in PROJECTION_AMPLITUDES:
                direct = fockspace.measure_double_occupancy(oracle.apply_gutzwiller(sea, g))
                derived = oracle.gutzwiller_d_via_normalization(lattice, filling, g)
                result.record(abs(direct - derived))
        return result

    def check_finite_size_trend(self) -> CheckResult:
        result = CheckResult(name="finite_size_trend", tolerance=1e-12)
        sizes = [L for L in FINITE_SIZE_LATTICES if L <= self.max_L]
        for g in PROJECTION_AMPLITUDES:
            limit = analytic.gutzwiller_d(g, 1.0)
            deviations = []
            for L in sizes:
                sea = oracle.build_fermi_sea(LatticeSpec.half_filled(L), FillingSpec(N_up=L // 2, N_down=L // 2))
                measured = fockspace.measure_double_occupancy(oracle.apply_gutzwiller(sea, g))
                deviations.append(abs(measured - limit))
                logger.debug(f"[Validate] L={L}, g={g}: d={measured!r}, closed form {limit!r}")
            for earlier, later in zip(deviations, deviations[1:]):
                result.record(max(0.0, later - earlier))
        return result

    def _bcs_settings(self):
        if self._bcs_cache is None:
            self._bcs_cache = list(self._build_bcs_settings())
        return self._bcs_cache

    def _build_bcs_settings(self):
        sizes = [L for L in BCS_LATTICES if L <= min(self.max_L, app_settings.SITEMIX_MAX_FULL_SPACE_SITES)]
        for L in sizes:
            lattice = LatticeSpec(L=L, boundary=constants.BOUNDARY_PERIODIC)
            for _ in range(app_settings.SITEMIX_VALIDATION_BCS_SETTINGS):
                params = BcsParams(n=1.0, delta0=self.rng.uniform(0.05, 1.0), omega_d=self.rng.uniform(0.2, 2.0))
                amplitudes = oracle.bcs_amplitudes(lattice, params)
                state = oracle.build_bcs_from_amplitudes(lattice, amplitudes.u, amplitudes.v)
                yield lattice, amplitudes, state

    def check_bcs_pairing_sum_rule(self) -> CheckResult:
        result = CheckResult(name="bcs_pairing_sum_rule", tolerance=1e-12)
        for lattice, amplitudes, state in self._bcs_settings():
            for site in range(lattice.L):
                result.record(abs(fockspace.measure_pairing(state, site) - amplitudes.zeta))
        return result

    def check_bcs_double_occupancy(self) -> CheckResult:
        result = CheckResult(name="bcs_double_occupancy", tolerance=1e-12)
        for _, amplitudes, state in self._bcs_settings():
            expected = (amplitudes.density / 2.0) ** 2 + amplitudes.zeta**2
            result.record(abs(fockspace.measure_double_occupancy(state) - expected))
        return result

    def check_bcs_epsilon_pipeline(self) -> CheckResult:
        result = CheckResult(name="bcs_epsilon_pipeline", tolerance=1e-12)
        for _, _, state in self._bcs_settings():
            rdm = fockspace.single_site_rdm(state, 0)
            n = float(np.real(rdm.entries[constants.UP, constants.UP] + rdm.entries[constants.DOWN, constants.DOWN]))
            n += 2.0 * float(np.real(rdm.entries[constants.DOUBLE, constants.DOUBLE]))
            params = DensityParams.unpolarized(
                n=n, d=fockspace.measure_double_occupancy(state), zeta=abs(fockspace.measure_pairing(state, 0))
            )
            result.record(abs(analytic.epsilon(rdm) - analytic.epsilon(analytic.site_rdm(params))))
        return result

    def check_bcs_reference_value(self) -> CheckResult:
        result = CheckResult(name="bcs_reference_value", tolerance=1e-5)
        params = BcsParams.from_ratios(n=1.0, omega_ef=0.1, delta_ratio=1.0)
        result.record(abs(analytic.bcs_epsilon(params) - 0.98825))
        return result

    def check_bcs_monotonicity(self) -> CheckResult:
        result = CheckResult(name="bcs_monotonicity", tolerance=1e-15)
        for n, omega_ef in ENTANGLEMENT_CURVES:
            values = np.array(
                [
                    analytic.bcs_epsilon(BcsParams.from_ratios(n=n, omega_ef=omega_ef, delta_ratio=ratio))
                    for ratio in np.linspace(0.0, 1.0, 101)
                ]
            )
            result.record(max(0.0, float(np.max(np.diff(values)))))
        return result

    def check_bcs_normal_state(self) -> CheckResult:
        result = CheckResult(name="bcs_normal_state", tolerance=1e-12)
        for n, expected in ((1.0, 1.0), (0.5, 0.8125)):
            for _, omega_ef in ENTANGLEMENT_CURVES:
                params = BcsParams.from_ratios(n=n, omega_ef=omega_ef, delta_ratio=0.0)
                result.record(abs(analytic.bcs_epsilon(params) - expected))
        return result

    def check_concurrence_onset(self) -> CheckResult:
        result = CheckResult(name="concurrence_onset", tolerance=1e-12)
        onset_zeta = (math.sqrt(2.0) - 1.0) / 2.0
        onset = analytic.concurrence_onset(1.0, 0.5)
        zeta = analytic.bcs_zeta(BcsParams.from_ratios(n=1.0, omega_ef=0.5, delta_ratio=onset))
        result.record(abs(zeta - onset_zeta))
        for ratio in np.linspace(0.0, 0.272, 69):
            C = analytic.bcs_concurrence(BcsParams.from_ratios(n=1.0, omega_ef=0.5, delta_ratio=ratio))
            result.record(C)
        for ratio in np.linspace(0.277, 1.0, 100):
            C = analytic.bcs_concurrence(BcsParams.from_ratios(n=1.0, omega_ef=0.5, delta_ratio=ratio))
            result.record(0.0 if C > 0.0 else float("inf"))
        return result

    def check_wootters_equivalence(self) -> CheckResult:
        result = CheckResult(name="wootters_equivalence", tolerance=1e-12)
        for _ in range(app_settings.SITEMIX_VALIDATION_SAMPLES):
            params = random_pairing_params(self.rng)
            general = analytic.wootters_concurrence(analytic.site_rdm(params))
            result.record(abs(general - analytic.concurrence_x(params.n, params.d, params.zeta)))
        return result

    def check_nagaoka_discrepancy(self) -> CheckResult:
        result = CheckResult(name="nagaoka_discrepancy", tolerance=1e-12)
        for N in range(2, 65):
            for l in range(N):
                values = analytic.nagaoka_epsilon(NagaokaParams(N=N, l=l))
                result.record(abs(values.discrepancy - 8.0 / (3.0 * N * N)))
        return result

    def check_nagaoka_oracle(self) -> CheckResult:
        result = CheckResult(name="nagaoka_oracle", tolerance=1e-12)
        for L in range(2, min(self.max_L, 8) + 1):
            for l in range(L):
                state = oracle.build_nagaoka_multiplet(L, l)
                expected = np.sort([1.0 / L, 0.0, 1.0 - (l + 1) / L, l / L])
                for site in range(L):
                    eigenvalues = fockspace.single_site_rdm(state, site).eigenvalues
                    result.record(float(np.max(np.abs(eigenvalues - expected))))
                values = analytic.nagaoka_epsilon(NagaokaParams(N=L, l=l))
                measured = fockspace.global_epsilon(state)
                result.record(abs(measured - values.direct))
                result.record(abs(values.paper_form - measured - 8.0 / (3.0 * L * L)))
        return result


def run_validate(max_L: int, seed: int) -> ValidationReport:
    """
    Run the whole invariant suite up to `max_L` sites

    Deterministic for a given seed. Raises ParameterDomainError for max_L
    outside 2..10; failures are reported, not raised.
    """
    logger.info(f"[Validate] Running invariant suite up to L={max_L} with seed {seed}")
    report = ValidationSuite(max_L=max_L, seed=seed).run()
    logger.info(f"[Validate] {len(report.results) - len(report.failures)}/{len(report.results)} checks passed")
    return report
