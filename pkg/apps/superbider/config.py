# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long

CONFIG_ROOTS = ["./", "~/.config/superbider", "/etc/superbider"]
CONFIG_FILE = "superbider.yaml"
CONFIG_SECTION = "superbider"

TIME_FORMAT = "%Y-%m-%dT%H:%M:%S%z"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3

FILE_MAGIC = "superalgebra v1"

REPORT_KEYS = [
    "name",
    "field",
    "dim",
    "even_dim",
    "odd_dim",
    "valid",
    "center_dim",
    "derived_dim",
    "simplicity",
    "simplicity_certificate",
    "centroid_even_dim",
    "centroid_odd_dim",
    "sderiv_even_dim",
    "sderiv_odd_dim",
    "sderiv_outer_even_dim",
    "sderiv_outer_odd_dim",
    "bider_even_dim",
    "bider_odd_dim",
    "bider_inner",
    "bider_lambda",
    "commuting_dim",
    "commuting_scalar",
    "commuting_lambda",
]

CONFIG_ITEMS = [
    {
        "name": "threads",
        "friendly_name": "Worker processes, auto to match the CPU count, 0 to run inline",
        "type": "input_number",
        "min": 0,
        "max": 256,
        "default": "auto",
    },
    {
        "name": "enumeration_budget",
        "friendly_name": "Maximum number of lines enumerated by the simplicity check",
        "type": "input_number",
        "min": 1,
        "max": 10**9,
        "default": 10**6,
    },
    {
        "name": "good_primes",
        "friendly_name": "Primes tried for reduction, smallest first",
        "type": "input_list",
        "default": [3, 5, 7, 11, 13],
    },
    {
        "name": "prime",
        "friendly_name": "Reduction prime, 0 to pick the smallest good prime",
        "type": "input_number",
        "min": 0,
        "max": 2**31 - 1,
        "default": 0,
    },
    {
        "name": "random_samples",
        "friendly_name": "Pseudorandom vectors closed to ideals before reduction",
        "type": "input_number",
        "min": 0,
        "max": 1000,
        "default": 8,
    },
    {
        "name": "random_seed",
        "friendly_name": "Seed of the sample vector generator",
        "type": "input_number",
        "min": 0,
        "max": 2**32 - 1,
        "default": 1,
    },
    {
        "name": "simplicity_policy",
        "friendly_name": "Simplicity policy",
        "type": "select",
        "options": ["auto", "exhaustive", "heuristic"],
        "default": "auto",
    },
    {
        "name": "verify_results",
        "friendly_name": "Substitute every basis element back into its defining identity",
        "type": "switch",
        "default": True,
    },
    {
        "name": "debug_enable",
        "friendly_name": "Debug logging",
        "type": "switch",
        "default": False,
    },
]
