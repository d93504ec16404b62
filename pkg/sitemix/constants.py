"""
Constants for sitemix
"""

# Single-site basis, in the order used for every 4x4 reduced density matrix
LOCAL_HOLE = "hole"
LOCAL_DOUBLE = "double"
LOCAL_UP = "up"
LOCAL_DOWN = "down"

LOCAL_BASIS = (LOCAL_HOLE, LOCAL_DOUBLE, LOCAL_UP, LOCAL_DOWN)

# Index of each local state in LOCAL_BASIS
HOLE, DOUBLE, UP, DOWN = range(4)

# Spin labels
SPIN_UP = "up"
SPIN_DOWN = "down"

SPIN_CHOICES = [
    (SPIN_UP, "Up"),
    (SPIN_DOWN, "Down"),
]

# Ring boundary conditions
BOUNDARY_PERIODIC = "periodic"
BOUNDARY_ANTIPERIODIC = "antiperiodic"

BOUNDARY_CHOICES = [
    (BOUNDARY_PERIODIC, "Periodic"),
    (BOUNDARY_ANTIPERIODIC, "Antiperiodic"),
]

# Entanglement classes and their ceilings
CLASS_SPIN_ONLY = "spin-only"
CLASS_WITH_HOLES = "with-holes"
CLASS_FULL = "full"

CLASS_CHOICES = [
    (CLASS_SPIN_ONLY, "No holes, no double occupancy"),
    (CLASS_WITH_HOLES, "Holes, no double occupancy"),
    (CLASS_FULL, "Holes and double occupancy"),
]

# Sweep families
FAMILY_GUTZWILLER = "gutzwiller"
FAMILY_BCS_EPSILON = "bcs-epsilon"
FAMILY_BCS_CONCURRENCE = "bcs-concurrence"
FAMILY_NAGAOKA = "nagaoka"

SWEEP_FAMILY_CHOICES = [
    (FAMILY_GUTZWILLER, "Entanglement of the Gutzwiller state versus g"),
    (FAMILY_BCS_EPSILON, "Entanglement of the BCS state versus gap"),
    (FAMILY_BCS_CONCURRENCE, "On-site concurrence of the BCS state versus gap"),
    (FAMILY_NAGAOKA, "Entanglement of the Nagaoka multiplet versus down-spin count"),
]

# Name of the swept column per family
SWEEP_VARIABLE = {
    FAMILY_GUTZWILLER: "g",
    FAMILY_BCS_EPSILON: "delta_ratio",
    FAMILY_BCS_CONCURRENCE: "delta_ratio",
    FAMILY_NAGAOKA: "l",
}

# Single-point evaluation families
EVAL_GUTZWILLER_D = "gutzwiller-d"
EVAL_GUTZWILLER = "gutzwiller"
EVAL_METALLIC = "metallic"
EVAL_BCS_ZETA = "bcs-zeta"
EVAL_BCS_EPSILON = "bcs-epsilon"
EVAL_BCS_CONCURRENCE = "bcs-concurrence"
EVAL_BCS_ONSET = "bcs-onset"
EVAL_NAGAOKA = "nagaoka"
EVAL_CLASS_MAX = "class-max"

EVAL_FAMILY_CHOICES = [
    (EVAL_GUTZWILLER_D, "Double occupancy of the 1-D Gutzwiller state"),
    (EVAL_GUTZWILLER, "Entanglement of the Gutzwiller state"),
    (EVAL_METALLIC, "Entanglement of the uncorrelated Fermi sea"),
    (EVAL_BCS_ZETA, "On-site pairing amplitude"),
    (EVAL_BCS_EPSILON, "Entanglement of the BCS state"),
    (EVAL_BCS_CONCURRENCE, "On-site concurrence of the BCS state"),
    (EVAL_BCS_ONSET, "Gap ratio at which the on-site concurrence switches on"),
    (EVAL_NAGAOKA, "Entanglement of a Nagaoka multiplet member"),
    (EVAL_CLASS_MAX, "Ceiling of an entanglement class"),
]

# Figure presets
PRESET_FIG1 = "fig1"
PRESET_FIG2 = "fig2"
PRESET_FIG3 = "fig3"

PRESET_CHOICES = [
    (PRESET_FIG1, "Gutzwiller entanglement versus g"),
    (PRESET_FIG2, "BCS entanglement versus gap"),
    (PRESET_FIG3, "BCS on-site concurrence versus gap"),
]

# Output formats
FORMAT_CSV = "csv"
FORMAT_TSV = "tsv"

FORMAT_CHOICES = [
    (FORMAT_CSV, "Comma separated"),
    (FORMAT_TSV, "Tab separated"),
]

FORMAT_DELIMITERS = {
    FORMAT_CSV: ",",
    FORMAT_TSV: "\t",
}

# Process exit codes
EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_VALIDATION_FAILURE = 2
EXIT_IO_ERROR = 3
