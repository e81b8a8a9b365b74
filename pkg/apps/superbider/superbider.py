# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long
# pylint: disable=attribute-defined-outside-init

import os
import sys
import traceback
from datetime import datetime
from multiprocessing import Pool, cpu_count

import pytz
import yaml

THIS_VERSION = "v1.0.0"

from config import CONFIG_ITEMS, CONFIG_ROOTS, CONFIG_FILE, CONFIG_SECTION, REPORT_KEYS, TIME_FORMAT
from core import validate
from spaces import BIDERIVATION, CENTROID, COMMUTING, SUPERDERIVATION, compute_spaces, inner_certificate, outer_dimension, scalar_certificate, verify_space
from structure import UNKNOWN, center, derived_subalgebra, simplicity_check
from utils import format_bool, pool_running


class Analysis:
    """
    Everything computed for one algebra
    """

    def __init__(self, algebra, report, validation, verdict=None, spaces=None, verify_failures=None):
        self.algebra = algebra
        self.report = report
        self.validation = validation
        self.verdict = verdict
        self.spaces = spaces or {}
        self.verify_failures = verify_failures or []

    @property
    def budget_exceeded(self):
        return self.verdict is not None and self.verdict.status == UNKNOWN and self.verdict.method == "budget"

    def lines(self):
        return ["{} {}".format(key, self.report[key]) for key in REPORT_KEYS]


class SuperBider:
    """
    Application object: configuration, logging, status and the worker pool
    """

    def __init__(self, args=None, overrides=None, config_path=None, stream=None):
        self.stream = stream if stream is not None else sys.stderr
        self.overrides = dict(overrides or {})
        self.current_status = None
        self.had_errors = False
        self.pool = None
        self.processes = 0
        self.config_path = None
        if args is not None:
            self.args = dict(args)
        else:
            self.args = self.load_config(config_path)
        self.debug_enable = self.get_arg("debug_enable", False)

    def log(self, message):
        """
        Log one line to the error stream so the report on standard output stays clean
        """
        stamp = datetime.now(pytz.utc).strftime(TIME_FORMAT)
        self.stream.write("{}: {}\n".format(stamp, message))
        self.stream.flush()

    def record_status(self, message, had_errors=False):
        """
        Records the current status
        """
        self.current_status = message
        if had_errors:
            self.had_errors = True
        self.log("Info: record_status {}".format(message))

    def find_config(self, path=None):
        if path:
            return path
        for root in CONFIG_ROOTS:
            candidate = os.path.join(os.path.expanduser(root), CONFIG_FILE)
            if os.path.exists(candidate):
                return candidate
        return None

    def load_config(self, path=None):
        """
        Read the superbider section of the YAML configuration
        """
        path = self.find_config(path)
        if not path:
            return {}
        self.config_path = path
        try:
            with open(path, "r", encoding="utf-8") as han:
                data = yaml.safe_load(han)
        except (OSError, yaml.YAMLError) as e:
            self.log("Error: Unable to read configuration {}: {}".format(path, e))
            self.record_status("Error: Unable to read configuration {}".format(path), had_errors=True)
            return {}
        if not data:
            return {}
        if not isinstance(data, dict) or not isinstance(data.get(CONFIG_SECTION, {}), dict):
            self.log("Error: Configuration {} has no {} section".format(path, CONFIG_SECTION))
            self.record_status("Error: Bad configuration {}".format(path), had_errors=True)
            return {}
        section = data.get(CONFIG_SECTION, {}) or {}
        known = set(item["name"] for item in CONFIG_ITEMS)
        for name in section:
            if name not in known:
                self.log("Warn: Unknown configuration item {} in {}".format(name, path))
        return section

    def config_item(self, name):
        for item in CONFIG_ITEMS:
            if item["name"] == name:
                return item
        return None

    def get_arg(self, arg, default=None):
        """
        Argument getter: command line override, then configuration file, then CONFIG_ITEMS default
        """
        item = self.config_item(arg)
        if item and default is None:
            default = item.get("default")
        value = self.overrides.get(arg)
        if value is None:
            value = self.args.get(arg, default)

        if isinstance(default, float):
            try:
                value = float(value)
            except (ValueError, TypeError):
                self.log("Warn: Return bad float value {} from {} using default {}".format(value, arg, default))
                self.record_status("Warn: Return bad float value {} from {}".format(value, arg), had_errors=True)
                value = default
        elif isinstance(default, int) and not isinstance(default, bool):
            try:
                value = int(float(value))
            except (ValueError, TypeError):
                self.log("Warn: Return bad int value {} from {} using default {}".format(value, arg, default))
                self.record_status("Warn: Return bad int value {} from {}".format(value, arg), had_errors=True)
                value = default
        elif isinstance(default, bool) and isinstance(value, str):
            if value.lower() in ["on", "true", "yes", "enabled", "enable"]:
                value = True
            else:
                value = False
        elif isinstance(default, list):
            if not isinstance(value, list):
                value = [value]

        if item and isinstance(value, (int, float)) and not isinstance(value, bool):
            low = item.get("min")
            high = item.get("max")
            if (low is not None and value < low) or (high is not None and value > high):
                self.log("Warn: Value {} of {} outside {}..{} using default {}".format(value, arg, low, high, default))
                value = default
        if item and item.get("options") and value not in item["options"]:
            self.log("Warn: Value {} of {} is not one of {} using default {}".format(value, arg, item["options"], default))
            value = default
        return value

    def create_pool(self):
        """
        Start the worker pool as configured by threads
        """
        threads = self.get_arg("threads", "auto")
        if threads == "auto":
            self.processes = cpu_count()
            self.log("Creating pool of {} processes to match your CPU count".format(self.processes))
        else:
            try:
                self.processes = int(threads)
            except (ValueError, TypeError):
                self.log("Warn: Bad threads value {}, running without a pool".format(threads))
                self.processes = 0
        if self.processes > 0:
            if threads != "auto":
                self.log("Creating pool of {} processes as per configuration".format(self.processes))
            self.pool = Pool(processes=self.processes)
        else:
            self.log("Not using a pool as threads is set to 0")
            self.pool = None
        return self.pool

    def close_pool(self):
        if self.pool:
            try:
                self.pool.close()
                self.pool.join()
            except Exception as e:
                self.log("Warn: Failed to close worker pool {}".format(e))
                self.log("Warn: " + traceback.format_exc())
            self.pool = None

    @property
    def parts(self):
        """
        Number of chunks enumeration work is split into
        """
        return max(1, self.processes) if pool_running(self.pool) else 1

    def check_simplicity(self, algebra):
        return simplicity_check(
            algebra,
            policy=self.get_arg("simplicity_policy"),
            budget=self.get_arg("enumeration_budget"),
            prime=self.get_arg("prime"),
            samples=self.get_arg("random_samples"),
            seed=self.get_arg("random_seed"),
            pool=self.pool,
            parts=self.parts,
            good_primes=[int(p) for p in self.get_arg("good_primes")],
        )

    def analyze(self, algebra):
        """
        Validate, classify and compute every space of an algebra
        """
        field = algebra.field
        report = {key: "-" for key in REPORT_KEYS}
        report["name"] = algebra.name
        report["field"] = field.name()
        report["dim"] = algebra.dim
        report["even_dim"] = algebra.even_dim
        report["odd_dim"] = algebra.odd_dim
        self.record_status("Analyzing {} over {}".format(algebra.name, field.name()))

        validation = validate(algebra, self.pool)
        report["valid"] = format_bool(validation.is_valid)
        if not validation.is_valid:
            for line in validation.lines():
                self.log("Warn: {} violation {}".format(algebra.name, line))
            self.record_status("Warn: {} is not a Lie superalgebra".format(algebra.name), had_errors=True)
            return Analysis(algebra, report, validation)

        report["center_dim"] = center(algebra).dim
        report["derived_dim"] = derived_subalgebra(algebra).dim
        verdict = self.check_simplicity(algebra)
        report["simplicity"] = verdict.status
        report["simplicity_certificate"] = verdict.certificate()
        if self.debug_enable:
            self.log("Debug: simplicity {} {}".format(verdict.status, verdict.reason))

        spaces = compute_spaces(algebra, self.pool, check=False)
        report["centroid_even_dim"] = spaces[(CENTROID, 0)].dim
        report["centroid_odd_dim"] = spaces[(CENTROID, 1)].dim
        report["sderiv_even_dim"] = spaces[(SUPERDERIVATION, 0)].dim
        report["sderiv_odd_dim"] = spaces[(SUPERDERIVATION, 1)].dim
        report["sderiv_outer_even_dim"] = outer_dimension(algebra, 0, spaces[(SUPERDERIVATION, 0)])
        report["sderiv_outer_odd_dim"] = outer_dimension(algebra, 1, spaces[(SUPERDERIVATION, 1)])
        report["bider_even_dim"] = spaces[(BIDERIVATION, 0)].dim
        report["bider_odd_dim"] = spaces[(BIDERIVATION, 1)].dim

        certificates = []
        for degree in (0, 1):
            for phi in spaces[(BIDERIVATION, degree)].elements():
                certificates.append(inner_certificate(algebra, phi))
        report["bider_inner"] = format_bool(all(cert is not None for cert in certificates))
        if len(certificates) == 1 and certificates[0] is not None:
            report["bider_lambda"] = field.format(certificates[0].lam)

        commuting = spaces[(COMMUTING, 0)]
        scalar = scalar_certificate(algebra, commuting)
        report["commuting_dim"] = commuting.dim
        report["commuting_scalar"] = format_bool(scalar.all_scalar)
        if scalar.lam is not None:
            report["commuting_lambda"] = field.format(scalar.lam)

        failures = []
        if self.get_arg("verify_results"):
            for job, space in spaces.items():
                for number, identity, witness in verify_space(algebra, space):
                    failures.append((job, number, identity, witness))
                    self.log("Error: {} degree {} basis element {} fails {} at {}".format(job[0], job[1], number + 1, identity, tuple(i + 1 for i in witness)))
            if failures:
                self.record_status("Error: {} verification failures for {}".format(len(failures), algebra.name), had_errors=True)
        self.record_status("Analyzed {}".format(algebra.name))
        return Analysis(algebra, report, validation, verdict, spaces, failures)
