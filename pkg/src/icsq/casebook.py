"""Built-in executable case studies.

Each case pairs a bundled scenario file with the diagnostic codes its
statements must produce and with probability tables generated ahead of time
by a standalone oracle (tools/generate_casebook.py), so golden tests never
compare the engine against itself or against hand-typed numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .elaborate import elaborate, evaluate_probabilities
from .lang import parse
from .lang.ast import Scenario

CASE_NAMES = ("stern_gerlach", "double_slit", "singlet_bell", "wigner_friend")


@dataclass(frozen=True)
class CaseStudy:
    name: str
    scenario: Scenario
    source: str
    expected_codes: dict  # statement id -> list of diagnostic codes
    expected_probabilities: tuple  # (structure id, config id, {label text: p})


def _data(path: str) -> str:
    return resources.files("icsq").joinpath(f"data/cases/{path}").read_text("utf-8")


def _manifest() -> dict:
    return json.loads(_data("expected.json"))


def case_source(name: str) -> str:
    if name not in CASE_NAMES:
        raise KeyError(f"no case study named {name!r}")
    return _data(f"{name}.icsq")


def label_text(label) -> str:
    """Canonical text form of an outcome label, matching the scenario syntax."""
    if isinstance(label, tuple):
        return "(" + ", ".join(label_text(part) for part in label) + ")"
    return str(label)


def load_case(name: str) -> CaseStudy:
    source = case_source(name)
    result = parse(source)
    if not result.ok:
        raise RuntimeError(f"bundled case {name!r} fails to parse: {result.errors}")
    entry = _manifest()[name]
    expected = tuple(
        (item["structure"], item["config"], dict(item["probabilities"]))
        for item in entry["expected_probabilities"]
    )
    codes = {key: list(value) for key, value in entry["expected_codes"].items()}
    statement_ids = {statement.id for statement in result.scenario.statements}
    missing = set(codes) - statement_ids
    if missing:
        raise RuntimeError(f"case {name!r} expects codes for unknown statements {missing}")
    return CaseStudy(
        name=name,
        scenario=result.scenario,
        source=source,
        expected_codes=codes,
        expected_probabilities=expected,
    )


def stern_gerlach() -> CaseStudy:
    return load_case("stern_gerlach")


def double_slit() -> CaseStudy:
    return load_case("double_slit")


def singlet_bell() -> CaseStudy:
    return load_case("singlet_bell")


def wigner_friend() -> CaseStudy:
    return load_case("wigner_friend")


def all_cases() -> dict:
    return {name: load_case(name) for name in CASE_NAMES}


def repeatability_pairs() -> list:
    """(case name, structure id, config id) triples used for the frequency
    stability checks."""
    return [tuple(item) for item in _manifest()["repeatability_pairs"]]


def case_probabilities(case: CaseStudy, structure_id: str, config_id: str) -> dict:
    """Engine-computed distribution for a declared pair, keyed by label text.
    Configurations over one factor of a composite yield the marginal."""
    env = elaborate(case.scenario)
    dist = evaluate_probabilities(env, structure_id, config_id)
    return {label_text(label): p for label, p in dist.items()}
