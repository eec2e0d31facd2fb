import os
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.dirname(BASE_DIR)
RESULTS_DIR = os.path.join(PROJECT_ROOT, "results")
# default checkpoint CSV for a scenario: results/<scenario>.csv (+ .json sidecar)
CHECKPOINT_TEMPLATE = os.path.join(RESULTS_DIR, "{scenario}.csv")
# default figure for `plot`: next to its CSV, with the extension swapped
PLOT_SUFFIX = ".svg"
# name -> where each registry constant is published
CONSTANT_LOCATIONS = os.path.join(BASE_DIR, "constant_locations.csv")
ACCEPTANCE_JSON = os.path.join(RESULTS_DIR, "scenario_comparison.json")


def checkpoint_path(scenario_name):
    return CHECKPOINT_TEMPLATE.format(scenario=scenario_name)


def plot_path(csv_path):
    return os.path.splitext(csv_path)[0] + PLOT_SUFFIX
