"""
Registry of exact, conjectured and estimated separability/PPT probabilities.

Closed forms are stored as expression strings over pi, log and sqrt, and
evaluated with mpmath: integer literals are lifted to mpf first, so forms
like 8962661573/4725 - 192192*pi**2 keep their digits.
"""

import csv
import os
import re
from dataclasses import dataclass
from functools import lru_cache

from mpmath import mp

from data import paths

STATUSES = ("proven", "conjectured", "estimate", "superseded")
EVAL_DPS = 40

_NUMBER = re.compile(r"(?<![\w.])(\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)")


def evaluate_closed_form(expression, dps=EVAL_DPS):
    """Evaluate a closed-form string at dps digits and return the mpf."""
    lifted = _NUMBER.sub(r"mpf('\1')", expression)
    with mp.workdps(dps):
        namespace = {"mpf": mp.mpf, "pi": +mp.pi, "log": mp.log, "sqrt": mp.sqrt}
        return +eval(lifted, {"__builtins__": {}}, namespace)


@dataclass(frozen=True)
class ConstantEntry:
    """
    A named probability.

    location is where the value is published (section, equation); provenance
    says which system and sampling/analysis it belongs to.
    """
    name: str
    closed_form: str
    value: float
    status: str
    location: str
    provenance: str


@lru_cache(maxsize=None)
def _locations(path=paths.CONSTANT_LOCATIONS):
    with open(path, "r", newline="", encoding="utf-8") as f:
        return {row["name"]: row["location"] for row in csv.DictReader(f)}


def _entry(name, closed_form, status, provenance):
    if status not in STATUSES:
        raise ValueError(f"unknown status {status!r} for {name}")
    value = float(evaluate_closed_form(closed_form))
    return ConstantEntry(name, closed_form, value, status, _locations().get(name, ""), provenance)


_TABLE = (
    # Hilbert-Schmidt two-qubit family (Dyson-type index 1, 2, 4)
    ("hs_two_rebit", "29/64", "proven", "HS two-rebit, hypergeometric formula at alpha=1"),
    ("hs_two_qubit", "8/33", "proven", "HS two-qubit, hypergeometric formula at alpha=2"),
    ("hs_two_quaterbit", "26/323", "proven", "HS two-quaterbit, hypergeometric formula at alpha=4"),
    ("hs_two_rebit_det_half", "29/128", "proven", "HS two-rebit PPT states with |rho^PT| > |rho|"),
    ("hs_two_qubit_det_half", "4/33", "proven", "HS two-qubit PPT states with |rho^PT| > |rho|"),
    ("hs_two_quaterbit_det_half", "13/323", "proven", "HS two-quaterbit PPT states with |rho^PT| > |rho|"),
    ("induced_k1_two_qubit", "61/143", "proven", "two-qubit induced measure k=1"),
    # Bures and operator-monotone sqrt(x)
    ("bures_two_qubit", "25/341", "conjectured", "Bures two-qubit, fit to quasirandom run"),
    ("bures_two_qubit_alt", "sqrt(51)/pi**4", "conjectured", "Bures two-qubit, alternative fit"),
    ("bures_two_qubit_2002", "8/(11*pi**2)", "superseded", "Bures two-qubit, early conjecture"),
    ("bures_two_qubit_silver", "1680*(sqrt(2)-1)/pi**8", "superseded", "Bures two-qubit, silver-mean conjecture"),
    ("bures_two_qubit_run", "0.073313759", "estimate", "Bures two-qubit quasirandom run"),
    ("bures_two_qubit_prior", "0.0733181043", "estimate", "Bures two-qubit independent sampling"),
    ("bures_two_rebit", "0.157096234", "estimate", "Bures two-rebit quasirandom run"),
    ("bures_two_rebit_prior", "0.1571469", "estimate", "Bures two-rebit independent sampling"),
    ("bures_det_partition", "5894648/8945951", "estimate", "Bures two-qubit PPT fraction with |rho^PT| > |rho|"),
    ("sqrtx_two_qubit", "1 - 256/(27*pi**2)", "proven", "two-qubit, operator monotone sqrt(x)"),
    ("sqrtx_two_qubit_entangled", "256/(27*pi**2)", "proven", "two-qubit entanglement, operator monotone sqrt(x)"),
    ("sqrtx_two_rebit", "0.26223001318", "estimate", "two-rebit, operator monotone sqrt(x), numerical"),
    # qubit-qutrit / rebit-retrit
    ("hs_qubit_qutrit", "27/1000", "conjectured", "HS qubit-qutrit"),
    ("hs_qubit_qutrit_run", "0.0269923", "estimate", "HS qubit-qutrit quasirandom run"),
    ("hs_qubit_qutrit_prior", "0.026997690", "estimate", "HS qubit-qutrit independent sampling"),
    ("hs_rebit_retrit", "860/6561", "conjectured", "HS rebit-retrit"),
    ("hs_rebit_retrit_run", "0.1310848", "estimate", "HS rebit-retrit quasirandom run"),
    ("hs_rebit_retrit_prior", "0.1310777629", "estimate", "HS rebit-retrit independent sampling"),
    ("bures_qubit_qutrit", "1/715", "conjectured", "Bures qubit-qutrit"),
    ("bures_qubit_qutrit_run", "1479997/1058000000", "estimate", "Bures qubit-qutrit quasirandom run"),
    ("bures_qubit_qutrit_fig", "0.00139884", "estimate", "Bures qubit-qutrit quasirandom run, reported rounding"),
    ("hypothesized_qubit_qutrit", "(5/3)*(112*pi**2 - 1105)", "conjectured",
     "qubit-qutrit, two-qubit separability function assumed"),
    ("hypothesized_quaterbit_quatertrit", "8962661573/4725 - 192192*pi**2", "conjectured",
     "quaterbit-quatertrit, two-quaterbit separability function assumed"),
    # higher dimensions
    ("bures_2x4_ppt", "625/109531136", "conjectured", "Bures qubit-qudit 2x4 PPT"),
    ("bures_2x4_run", "0.0000057349398", "estimate", "Bures qubit-qudit 2x4 quasirandom run"),
    ("bures_two_qutrit", "0.000000063421829", "estimate", "Bures two-qutrit quasirandom run"),
    ("hs_2x4_ppt", "16/12375", "conjectured", "HS qubit-qudit 2x4 PPT"),
    ("hs_2x4_run", "0.0012928963", "estimate", "HS qubit-qudit 2x4 quasirandom run"),
    ("hs_2x5_ppt", "125/4790016", "conjectured", "HS qubit-qudit 2x5 PPT"),
    ("hs_rebit_redit_2x4", "201/8192", "conjectured", "HS rebit-redit 2x4 PPT"),
    ("hs_rebit_redit_2x5", "29058/9765625", "conjectured", "HS rebit-redit 2x5 PPT"),
    ("hs_two_qutrit_a", "323/3161088", "conjectured", "HS two-qutrit PPT, first candidate"),
    ("hs_two_qutrit_b", "11/107653", "conjectured", "HS two-qutrit PPT, second candidate"),
    ("hs_two_qutrit_run", "0.00010275452", "estimate", "HS two-qutrit quasirandom run"),
    ("hs_two_qutrit_prior", "0.00010218", "estimate", "HS two-qutrit independent sampling"),
    ("hs_2x4_realign_entangled", "589/625", "conjectured", "HS 2x4 entanglement by realignment"),
    ("hs_2x4_realign_run", "0.942343", "estimate", "HS 2x4 entanglement by realignment, quasirandom run"),
    ("hs_2x4_bound_entangled", "0.000234478", "estimate", "HS 2x4 bound entanglement by realignment"),
    # X-states
    ("xstate_rebit_retrit", "16/(3*pi**2)", "proven", "HS X-states: two-rebit, rebit-retrit, two-retrit"),
    ("xstate_two_qubit", "2/5", "proven", "HS two-qubit X-states"),
    ("xstate_enlarged_two_retrit", "65/(36*pi)", "proven", "HS two-retrit X-states with one extra entry"),
    ("xstate_8d_numerator", "pi/967680", "proven", "8-dim X-state separable volume"),
    ("xstate_8d_denominator", "pi**3/5160960", "proven", "8-dim X-state total volume"),
    ("xstate_10d_denominator", "pi/29030400", "proven", "10-dim rebit-retrit X-state total volume"),
    ("xstate_10d_suboptimal_bound", "71/105", "conjectured",
     "10-dim rebit-retrit X-state upper bound from a leading-minor condition, by quadrature"),
    ("xstate_10d_suboptimal_bound_published", "919/5 - 264*log(2)", "superseded",
     "10-dim rebit-retrit X-state leading-minor bound as published; not reproduced by quadrature"),
    ("xstate_10d_rebit_retrit", "272/(45*pi**2)", "proven", "10-dim rebit-retrit X-state separability"),
)


def constants_registry():
    """Every registered constant, in a fixed order."""
    return [_entry(*row) for row in _TABLE]


def lookup(name):
    """One entry by name; KeyError when unknown."""
    for row in _TABLE:
        if row[0] == name:
            return _entry(*row)
    raise KeyError(f"no registered constant named {name!r}")


def registry_names():
    return [row[0] for row in _TABLE]


def write_csv(path, header, rows):
    """Write report rows (sequences of cells) as CSV with the given header."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
