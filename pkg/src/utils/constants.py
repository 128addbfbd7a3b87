"""Constants for the Grid scheduling model components."""

# Policy tags
POLICY_CLDS = "CLDS"
POLICY_LLS = "LLS"
POLICY_RS = "RS"
POLICY_DMMS = "DMMS"
POLICIES = [POLICY_CLDS, POLICY_LLS, POLICY_RS, POLICY_DMMS]

# Reference experiment presets (scale x load)
PRESET_SMALL_MEDIUM = "small-medium"
PRESET_MEDIUM_MEDIUM = "medium-medium"
PRESET_LARGE_MEDIUM = "large-medium"
PRESET_SMALL_HEAVY = "small-heavy"
PRESET_MEDIUM_HEAVY = "medium-heavy"
PRESET_LARGE_HEAVY = "large-heavy"
REFERENCE_PRESETS = [
    PRESET_SMALL_MEDIUM,
    PRESET_MEDIUM_MEDIUM,
    PRESET_LARGE_MEDIUM,
    PRESET_SMALL_HEAVY,
    PRESET_MEDIUM_HEAVY,
    PRESET_LARGE_HEAVY,
]

# Desk-scale presets for fast runs (not reference configurations)
PRESET_DESK_MEDIUM = "desk-medium"
PRESET_DESK_HEAVY = "desk-heavy"
DESK_PRESETS = [PRESET_DESK_MEDIUM, PRESET_DESK_HEAVY]

PRESET_ORIGIN_REFERENCE = "reference"
PRESET_ORIGIN_DESK = "desk"

# System loads
LOAD_MEDIUM = 0.6
LOAD_HEAVY = 0.9

# Default values
DEFAULT_NUM_SCHEDULERS = 10
DEFAULT_NUM_RESOURCES = 40
DEFAULT_CAPACITY_RANGE = (1.0, 10.0)
DEFAULT_JOB_LENGTH_RANGE = (10.0, 100.0)
DEFAULT_LOAD_FRACTION = LOAD_MEDIUM
DEFAULT_STEPS = 5000
DEFAULT_DESK_STEPS = 2000
DEFAULT_ALPHA = 0.1
DEFAULT_EPSILON = 0.0
DEFAULT_SEED = 0
DEFAULT_WINDOW = 100

# Remaining-length comparisons treat anything within this fraction of a
# resource's capacity as done
COMPLETION_TOLERANCE = 1e-9

# Valid ranges, reported back in configuration errors
FIELD_RANGES = {
    "num_schedulers": "integer >= 1",
    "num_resources": "integer >= 1",
    "capacity_range": "[c_min, c_max] with 0 < c_min <= c_max",
    "job_length_range": "[s_min, s_max] with 0 < s_min <= s_max",
    "load_fraction": "real in (0, 1]",
    "steps": "integer >= 0",
    "alpha": "real in (0, 1]",
    "epsilon": "real in [0, 1]",
    "policy": f"one of {POLICIES}",
    "policies": f"non-empty subset of {POLICIES}",
    "seed": "integer in [0, 2**64)",
    "fail_learner_at": "integer >= 0, or null",
    "arrival_carryover": "true or false",
    "window": "integer >= 1",
    "replicates": "integer >= 1",
    "preset": f"one of {REFERENCE_PRESETS + DESK_PRESETS}",
}

# CSV trace layout
TRACE_COLUMNS = ["step", "alor", "completed_jobs", "messages", "pending_length_total"]
CSV_FLOAT_FORMAT = "%.12g"

# Output file names
SUMMARY_FILE = "summary.json"
CONFIG_ECHO_FILE = "config.yaml"
REPLICATES_FILE = "replicates.csv"
MANIFEST_FILE = "MANIFEST.sha256"
