"""
Static scenario catalog: name -> system, measure and the registry constant
its estimates are divided by.
"""

from dataclasses import dataclass
from typing import Optional

from states.rmt import BURES_X, Scenario, bures, hilbert_schmidt


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    scenario: Scenario
    conjecture: Optional[str]
    description: str


_CATALOG = (
    CatalogEntry("two-rebit-hs", hilbert_schmidt(2, 2, "real"), "hs_two_rebit", "HS two-rebit, d=20"),
    CatalogEntry("two-qubit-hs", hilbert_schmidt(2, 2), "hs_two_qubit", "HS two-qubit, d=32"),
    CatalogEntry("two-qubit-induced1", Scenario(2, 2, "complex", "induced", k=1),
                 "induced_k1_two_qubit", "two-qubit induced k=1, d=40"),
    CatalogEntry("two-qubit-bures", bures(2, 2), "bures_two_qubit", "Bures two-qubit, d=64"),
    CatalogEntry("two-rebit-bures", bures(2, 2, "real"), "bures_two_rebit", "Bures two-rebit, d=36"),
    CatalogEntry("qubit-qutrit-hs", hilbert_schmidt(2, 3), "hs_qubit_qutrit", "HS qubit-qutrit, d=72"),
    CatalogEntry("rebit-retrit-hs", hilbert_schmidt(2, 3, "real"), "hs_rebit_retrit", "HS rebit-retrit, d=42"),
    CatalogEntry("qubit-qutrit-bures", bures(2, 3), "bures_qubit_qutrit", "Bures qubit-qutrit, d=144"),
    CatalogEntry("rebit-retrit-bures", bures(2, 3, "real"), None, "Bures rebit-retrit, d=78"),
    CatalogEntry("qubit-qudit-2x4-hs", hilbert_schmidt(2, 4), "hs_2x4_ppt", "HS qubit-qudit 2x4, d=128"),
    CatalogEntry("qubit-qudit-2x4-bures", bures(2, 4), "bures_2x4_ppt", "Bures qubit-qudit 2x4, d=256"),
    CatalogEntry("rebit-redit-2x4-hs", hilbert_schmidt(2, 4, "real"), "hs_rebit_redit_2x4",
                 "HS rebit-redit 2x4, d=72"),
    CatalogEntry("qubit-qudit-2x5-hs", hilbert_schmidt(2, 5), "hs_2x5_ppt", "HS qubit-qudit 2x5, d=200"),
    CatalogEntry("rebit-redit-2x5-hs", hilbert_schmidt(2, 5, "real"), "hs_rebit_redit_2x5",
                 "HS rebit-redit 2x5, d=110"),
    CatalogEntry("two-qutrit-hs", hilbert_schmidt(3, 3), "hs_two_qutrit_a", "HS two-qutrit, d=162"),
    CatalogEntry("two-qutrit-bures", bures(3, 3), "bures_two_qutrit", "Bures two-qutrit, d=324"),
)

SCENARIOS = {entry.name: entry for entry in _CATALOG}

_MEASURE_ALIASES = {"hs": ("induced", 0), "bures": ("osz", BURES_X)}


def resolve(name):
    """Catalog entry for name; ValueError listing the known names otherwise."""
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None


def parse_custom(text):
    """
    Build a Scenario from "nA,nB,field,measure[,k|x]".

    measure is induced (optional k, default 0), osz (optional x, default 1/2),
    or the shorthands hs / bures.
    """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (4, 5):
        raise ValueError(f"--custom needs nA,nB,field,measure[,k|x], got {text!r}")
    try:
        n_a, n_b = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"subsystem dimensions must be integers, got {parts[0]!r}, {parts[1]!r}") from None
    field, measure = parts[2], parts[3]

    if measure in _MEASURE_ALIASES:
        if len(parts) == 5:
            raise ValueError(f"measure {measure!r} takes no parameter")
        measure, value = _MEASURE_ALIASES[measure]
    else:
        value = parts[4] if len(parts) == 5 else None

    if measure == "induced":
        k = int(value) if value is not None else 0
        return Scenario(n_a, n_b, field, "induced", k=k)
    if measure == "osz":
        x = float(value) if value is not None else BURES_X
        return Scenario(n_a, n_b, field, "osz", x=x)
    raise ValueError(f"unknown measure {measure!r}; use induced, osz, hs or bures")


def custom_id(scenario):
    """Scenario id used in checkpoint rows for a --custom system."""
    if scenario.measure == "induced":
        return f"custom-{scenario.n_a}x{scenario.n_b}-{scenario.field}-induced{scenario.k}"
    return f"custom-{scenario.n_a}x{scenario.n_b}-{scenario.field}-osz{scenario.x!r}"
