"""Randomized search for inputs that break a bound chain."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .reverses import TARGET_CONSTANT, Form, InequalityReport, Verdict, evaluate, implied_constant
from .sampling import Instance, random_instance
from .two_inner import TwoInnerSpace

FORMS = tuple(Form)


@dataclass
class FormSummary:
    form: Form
    trials: int = 0
    holds: int = 0
    violated: int = 0
    hypothesis_unmet: int = 0
    max_ratio: float = -math.inf
    max_ratio_trial: int = -1

    @property
    def target(self) -> float:
        return TARGET_CONSTANT[self.form]


@dataclass(frozen=True)
class Failure:
    trial: int
    instance: Instance
    report: InequalityReport


@dataclass
class FuzzResult:
    dim: int
    mode: str
    trials: int
    seed: int
    summaries: dict[Form, FormSummary]
    failures: list[Failure] = field(default_factory=list)

    @property
    def violated(self) -> int:
        return sum(s.violated for s in self.summaries.values())

    @property
    def hypothesis_unmet(self) -> int:
        return sum(s.hypothesis_unmet for s in self.summaries.values())


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per trial, so any trial can be replayed on its own."""
    return np.random.default_rng([seed, trial])


def run_fuzz(s: TwoInnerSpace, trials: int, seed: int = 42, forms: tuple[Form, ...] = FORMS) -> FuzzResult:
    """Round-robin over ``forms``; trial ``k`` tests ``forms[k % len(forms)]``."""
    summaries = {f: FormSummary(f) for f in forms}
    result = FuzzResult(s.dim, s.mode, trials, seed, summaries)
    for k in range(trials):
        form = forms[k % len(forms)]
        inst = random_instance(trial_rng(seed, k), s, form)
        rep = evaluate(s, form, inst.x, inst.y, inst.z, inst.bounds)
        summ = summaries[form]
        summ.trials += 1
        if rep.verdict is Verdict.HOLDS:
            summ.holds += 1
        elif rep.verdict is Verdict.VIOLATED:
            summ.violated += 1
            result.failures.append(Failure(k, inst, rep))
        else:
            summ.hypothesis_unmet += 1
            result.failures.append(Failure(k, inst, rep))
        r = implied_constant(s, form, inst.x, inst.y, inst.z, inst.bounds)
        if math.isfinite(r) and r > summ.max_ratio:
            summ.max_ratio, summ.max_ratio_trial = r, k
    return result
