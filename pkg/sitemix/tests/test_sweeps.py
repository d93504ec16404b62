"""
Tests for sweeps and single-point evaluation
"""

# Standard Library
import csv
import io
import math
import os
import stat
import tempfile
from unittest import TestCase, skipIf

# sitemix
from sitemix import analytic, constants
from sitemix.models import BcsParams, ParameterDomainError, SweepSpec
from sitemix.services.sweeps import (
    eval_point,
    format_number,
    preset_spec,
    render_point,
    render_sweep,
    run_sweep,
    write_atomic,
)


def _table(text: str, delimiter: str = ","):
    return list(csv.reader(io.StringIO(text), delimiter=delimiter))


class PresetTest(TestCase):
    """Test the published figure presets"""

    def test_fig1(self):
        """Gutzwiller curves for four densities, 101 points"""
        rows = _table(render_sweep(preset_spec(constants.PRESET_FIG1)))
        self.assertEqual(rows[0], ["g", "eps_n1", "eps_n0.75", "eps_n0.5", "eps_n0.25"])
        self.assertEqual(len(rows), 102)
        self.assertEqual(rows[1][0], "0")
        self.assertEqual(rows[-1][0], "1")
        self.assertAlmostEqual(float(rows[1][1]), 2.0 / 3.0, delta=1e-12)
        self.assertAlmostEqual(float(rows[-1][1]), 1.0, delta=1e-12)

    def test_fig2_header(self):
        """BCS entanglement columns are named by density and Debye ratio"""
        rows = _table(render_sweep(preset_spec(constants.PRESET_FIG2)))
        self.assertEqual(rows[0], ["delta_ratio", "eps_n1_w0.1", "eps_n1_w0.2", "eps_n0.5_w0.1", "eps_n0.5_w0.2"])
        # the normal state: Fermi sea values
        self.assertAlmostEqual(float(rows[1][1]), 1.0, delta=1e-12)
        self.assertAlmostEqual(float(rows[1][3]), 0.8125, delta=1e-12)

    def test_fig3_header(self):
        """Concurrence columns use the C prefix"""
        rows = _table(render_sweep(preset_spec(constants.PRESET_FIG3)))
        self.assertEqual(rows[0], ["delta_ratio", "C_n1_w0.5", "C_n0.75_w0.5", "C_n1_w0.75", "C_n0.75_w0.75"])
        self.assertEqual(float(rows[1][1]), 0.0)
        self.assertAlmostEqual(float(rows[-1][1]), 0.37951, delta=1e-4)

    def test_unknown_preset(self):
        """Only fig1, fig2 and fig3 exist"""
        with self.assertRaises(ParameterDomainError):
            preset_spec("fig4")

    def test_byte_identical(self):
        """Rendering is deterministic"""
        spec = preset_spec(constants.PRESET_FIG3)
        self.assertEqual(render_sweep(spec), render_sweep(spec))

    def test_cells_round_trip(self):
        """Every printed cell re-parses to the value the closed form returns"""
        rows = _table(render_sweep(preset_spec(constants.PRESET_FIG1)))
        densities = (1.0, 0.75, 0.5, 0.25)
        for row in rows[1:]:
            g = float(row[0])
            for n, cell in zip(densities, row[1:]):
                self.assertEqual(float(cell), analytic.gutzwiller_epsilon(g, n))


class RenderSweepTest(TestCase):
    """Test custom sweeps and their output"""

    def test_tsv(self):
        """TSV uses tabs and LF line endings"""
        spec = SweepSpec(
            family=constants.FAMILY_GUTZWILLER, grid=(0.0, 1.0, 3), fixed={"n": [1.0]}, format=constants.FORMAT_TSV
        )
        text = render_sweep(spec)
        self.assertNotIn("\r", text)
        self.assertTrue(text.endswith("\n"))
        self.assertEqual(text.splitlines()[0], "g\teps_n1")
        self.assertEqual(text.splitlines()[2].split("\t")[0], "0.5")

    def test_nagaoka_pads_short_rings(self):
        """Grid points past l = N-1 are written as nan"""
        spec = SweepSpec(family=constants.FAMILY_NAGAOKA, grid=(0.0, 3.0, 4), fixed={"N": [3, 4]})
        rows = _table(render_sweep(spec))
        self.assertEqual(rows[0], ["l", "eps_N3", "paper_N3", "eps_N4", "paper_N4"])
        self.assertEqual(rows[4][1:3], ["nan", "nan"])
        self.assertFalse(math.isnan(float(rows[4][3])))
        for row in rows[1:4]:
            self.assertAlmostEqual(float(row[2]) - float(row[1]), 8.0 / 27.0, delta=1e-12)

    def test_nagaoka_needs_integer_grid(self):
        """Fractional down-spin counts are rejected"""
        spec = SweepSpec(family=constants.FAMILY_NAGAOKA, grid=(0.0, 1.0, 3), fixed={"N": [4]})
        with self.assertRaises(ParameterDomainError):
            render_sweep(spec)

    def test_format_number(self):
        """Seventeen significant digits, shortest form for exact values"""
        self.assertEqual(format_number(0.5), "0.5")
        self.assertEqual(format_number(1.0), "1")
        self.assertEqual(float(format_number(2.0 / 3.0)), 2.0 / 3.0)


class RunSweepTest(TestCase):
    """Test writing sweeps to disk"""

    def setUp(self):
        """Scratch directory"""
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def test_writes_output(self):
        """The file holds exactly the rendered text"""
        path = os.path.join(self.directory.name, "fig1.csv")
        text = run_sweep(preset_spec(constants.PRESET_FIG1, output=path))
        with open(path, encoding="utf-8", newline="") as stream:
            self.assertEqual(stream.read(), text)
        self.assertEqual(os.listdir(self.directory.name), ["fig1.csv"])

    def test_domain_error_leaves_no_file(self):
        """A grid point outside the domain aborts before anything is written"""
        path = os.path.join(self.directory.name, "bcs.csv")
        spec = SweepSpec(
            family=constants.FAMILY_BCS_EPSILON,
            grid=(0.0, 1.0, 11),
            fixed={"n": [1.0], "omega_ef": [2.0]},
            output=path,
        )
        with self.assertRaisesRegex(ParameterDomainError, "Gap too large"):
            run_sweep(spec)
        self.assertEqual(os.listdir(self.directory.name), [])

    @skipIf(os.name != "posix", "POSIX permission bits")
    def test_write_atomic_uses_umask_mode(self):
        """The written file is readable as a plain open() would leave it, not private"""
        path = os.path.join(self.directory.name, "fig1.csv")
        previous = os.umask(0o022)
        try:
            write_atomic(path, "x\n")
        finally:
            os.umask(previous)
        self.assertEqual(stat.S_IMODE(os.stat(path).st_mode), 0o644)

    def test_write_atomic_replaces(self):
        """An existing file is replaced whole"""
        path = os.path.join(self.directory.name, "out.csv")
        write_atomic(path, "old\n")
        write_atomic(path, "new\n")
        with open(path, encoding="utf-8") as stream:
            self.assertEqual(stream.read(), "new\n")
        self.assertEqual(os.listdir(self.directory.name), ["out.csv"])

    def test_write_atomic_missing_directory(self):
        """A missing target directory is an OSError"""
        with self.assertRaises(OSError):
            write_atomic(os.path.join(self.directory.name, "nope", "out.csv"), "x\n")


class EvalPointTest(TestCase):
    """Test single-point evaluation"""

    def test_gutzwiller_d(self):
        """d(g=0.5, n=1) = 0.1413988"""
        values = eval_point(constants.EVAL_GUTZWILLER_D, {"g": "0.5", "n": "1"})
        self.assertAlmostEqual(values["d"], 0.1413988, delta=1e-7)

    def test_gutzwiller(self):
        """Entanglement agrees with the sweep column"""
        values = eval_point(constants.EVAL_GUTZWILLER, {"g": "0.5", "n": "0.75"})
        self.assertEqual(list(values), ["d", "epsilon"])
        self.assertEqual(values["epsilon"], analytic.gutzwiller_epsilon(0.5, 0.75))

    def test_metallic(self):
        """Half filling is maximally entangled"""
        self.assertAlmostEqual(eval_point(constants.EVAL_METALLIC, {"n": "1"})["epsilon"], 1.0, delta=1e-12)

    def test_bcs_concurrence(self):
        """zeta, d and C at full gap"""
        values = eval_point(constants.EVAL_BCS_CONCURRENCE, {"n": "1", "omega_ef": "0.5", "delta_ratio": "1"})
        self.assertEqual(list(values), ["zeta", "d", "C"])
        self.assertAlmostEqual(values["zeta"], 0.330515, delta=1e-6)
        self.assertAlmostEqual(values["C"], 0.37951, delta=1e-5)

    def test_bcs_epsilon(self):
        """Matches the closed form"""
        values = eval_point(constants.EVAL_BCS_EPSILON, {"n": "1", "omega_ef": "0.1", "delta_ratio": "1"})
        self.assertAlmostEqual(values["epsilon"], 0.98825, delta=1e-5)
        params = BcsParams.from_ratios(n=1.0, omega_ef=0.1, delta_ratio=1.0)
        self.assertEqual(values["zeta"], analytic.bcs_zeta(params))

    def test_bcs_onset(self):
        """Onset near 0.2765 and none when the gap never gets there"""
        values = eval_point(constants.EVAL_BCS_ONSET, {"n": "1", "omega_ef": "0.5"})
        self.assertAlmostEqual(values["delta_ratio"], 0.2765, delta=1e-4)
        never = eval_point(constants.EVAL_BCS_ONSET, {"n": "1", "omega_ef": "0.1"})
        self.assertIsNone(never["delta_ratio"])
        self.assertEqual(render_point(never), ["delta_ratio=none"])

    def test_nagaoka(self):
        """The two forms differ by 8/(3N^2)"""
        values = eval_point(constants.EVAL_NAGAOKA, {"N": "4", "l": "1"})
        self.assertAlmostEqual(values["discrepancy"], 8.0 / 48.0, delta=1e-12)
        self.assertAlmostEqual(values["paper_form"] - values["direct"], 8.0 / 48.0, delta=1e-12)

    def test_class_max(self):
        """Ceilings of the three classes"""
        self.assertAlmostEqual(eval_point(constants.EVAL_CLASS_MAX, {"kind": "with-holes"})["epsilon"], 8.0 / 9.0)
        with self.assertRaises(ParameterDomainError):
            eval_point(constants.EVAL_CLASS_MAX, {"kind": "none"})

    def test_missing_parameter(self):
        """Every parameter of the family is required"""
        with self.assertRaisesRegex(ParameterDomainError, "Missing parameter.*omega_ef"):
            eval_point(constants.EVAL_BCS_ZETA, {"n": "1", "delta_ratio": "0.5"})

    def test_unknown_parameter(self):
        """Extra parameters are rejected"""
        with self.assertRaisesRegex(ParameterDomainError, "Unknown parameter.*h"):
            eval_point(constants.EVAL_METALLIC, {"n": "1", "h": "2"})

    def test_not_a_number(self):
        """Values must parse"""
        with self.assertRaisesRegex(ParameterDomainError, "not a number"):
            eval_point(constants.EVAL_METALLIC, {"n": "half"})
        with self.assertRaisesRegex(ParameterDomainError, "not an integer"):
            eval_point(constants.EVAL_NAGAOKA, {"N": "4.5", "l": "1"})

    def test_unknown_family(self):
        """Families outside the list raise"""
        with self.assertRaises(ParameterDomainError):
            eval_point("hubbard", {})

    def test_render_point(self):
        """name=value in insertion order"""
        self.assertEqual(render_point({"d": 0.25, "epsilon": 1.0}), ["d=0.25", "epsilon=1"])

    def test_render_point_tsv(self):
        """tsv puts a tab between name and value"""
        self.assertEqual(render_point({"d": 0.25, "zeta": None}, constants.FORMAT_TSV), ["d\t0.25", "zeta\tnone"])
