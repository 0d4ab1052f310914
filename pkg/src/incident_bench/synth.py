"""Synthetic EMR-like data calibrated to published class-conditional means.

Columns are sampled independently of each other given the class label;
there is no covariance structure. Standard deviations for the numeric
variables are calibration choices (only means and medians are published).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data_model import BINARY, NUMERIC, Dataset, Schema, VariableSpec, derive_rng, round_half_up

TOTAL_VARIABLES = 172
LABEL_NAME = "fall"


@dataclass(frozen=True)
class Law:
    """Normal(mean, sd) or Bernoulli(p); ``mean`` holds p for Bernoulli."""

    dist: str
    mean: float
    sd: float = 0.0

    def __post_init__(self):
        if self.dist not in ("normal", "bernoulli"):
            raise ValueError(f"unknown law {self.dist!r}")
        if self.dist == "bernoulli" and not 0.0 <= self.mean <= 1.0:
            raise ValueError(f"Bernoulli p must lie in [0, 1], got {self.mean}")
        if self.sd < 0:
            raise ValueError("sd must be non-negative")

    @classmethod
    def normal(cls, mean, sd):
        return cls("normal", float(mean), float(sd))

    @classmethod
    def bernoulli(cls, p):
        return cls("bernoulli", float(p))

    def sample(self, rng, size):
        if self.dist == "bernoulli":
            return (rng.random(size) < self.mean).astype(float)
        return rng.normal(self.mean, self.sd, size=size)

    def to_dict(self):
        if self.dist == "bernoulli":
            return {"dist": "bernoulli", "p": self.mean}
        return {"dist": "normal", "mean": self.mean, "sd": self.sd}

    @classmethod
    def from_dict(cls, d):
        if d["dist"] == "bernoulli":
            return cls.bernoulli(d["p"])
        return cls.normal(d["mean"], d["sd"])


@dataclass(frozen=True)
class VariableLaw:
    name: str
    kind: str
    fall: Law
    nofall: Law
    clamp: tuple | None = None
    description: str = ""

    def __post_init__(self):
        expected = "normal" if self.kind == NUMERIC else "bernoulli"
        if self.kind not in (NUMERIC, BINARY):
            raise ValueError(f"{self.name}: kind must be numeric or binary")
        if self.fall.dist != expected or self.nofall.dist != expected:
            raise ValueError(f"{self.name}: {self.kind} variables need {expected} laws")

    def to_dict(self):
        d = {"name": self.name, "kind": self.kind,
             "fall": self.fall.to_dict(), "nofall": self.nofall.to_dict()}
        if self.clamp is not None:
            d["clamp"] = list(self.clamp)
        if self.description:
            d["description"] = self.description
        return d

    @classmethod
    def from_dict(cls, d):
        clamp = d.get("clamp")
        return cls(d["name"], d["kind"], Law.from_dict(d["fall"]), Law.from_dict(d["nofall"]),
                   tuple(clamp) if clamp is not None else None, d.get("description", ""))


def filler_laws(count: int) -> list[VariableLaw]:
    """Label-independent filler variables (same law for both classes).

    Three out of four are sparse-to-moderate indicators, the rest numeric;
    parameters follow a fixed low-discrepancy sequence so every profile with
    the same count is identical.
    """
    out = []
    for i in range(count):
        frac = (0.5 + i * 0.6180339887498949) % 1.0
        name = f"filler_{i + 1:03d}"
        if i % 4 == 3:
            law = Law.normal(round(20 + 80 * frac, 3), round(5 + 20 * frac, 3))
            out.append(VariableLaw(name, NUMERIC, law, law))
        else:
            law = Law.bernoulli(round(0.02 + 0.38 * frac, 4))
            out.append(VariableLaw(name, BINARY, law, law))
    return out


@dataclass(frozen=True)
class GeneratorProfile:
    variables: tuple
    positives: int
    negatives: int
    filler_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.positives < 1 or self.negatives < 1:
            raise ValueError("class counts must be >= 1")
        names = [v.name for v in self.all_variables()]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names in profile")

    def all_variables(self) -> list[VariableLaw]:
        return list(self.variables) + filler_laws(self.filler_count)

    def law(self, name: str) -> VariableLaw:
        for v in self.all_variables():
            if v.name == name:
                return v
        raise KeyError(name)

    def schema(self) -> Schema:
        return Schema(
            tuple(VariableSpec(v.name, v.kind, description=v.description)
                  for v in self.all_variables()),
            LABEL_NAME,
        )

    def to_dict(self) -> dict:
        return {
            "positives": self.positives,
            "negatives": self.negatives,
            "filler_count": self.filler_count,
            "variables": [v.to_dict() for v in self.variables],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorProfile":
        return cls(tuple(VariableLaw.from_dict(v) for v in d["variables"]),
                   int(d["positives"]), int(d["negatives"]), int(d.get("filler_count", 0)))

    @classmethod
    def load(cls, path) -> "GeneratorProfile":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# (name, Table V label, fall mean, no-fall mean) for the indicator rows
_TABLE_V_BINARY = [
    ("gynecology", "Gynecology", 0.022, 0.0998),
    ("cardiology", "Cardiology", 0.0643, 0.0808),
    ("ophthalmology", "Ophthalmology", 0.0173, 0.0873),
    ("anesthesia_period_gt_avg", "Anesthesia period: > average", 0.0791, 0.1489),
    ("operation_period_gt_avg", "Operation period: > average", 0.1104, 0.1969),
    ("plan_a1", "Plan A-1", 0.0832, 0.2636),
    ("autonomy", "Autonomy", 0.0799, 0.2517),
    ("aaa_medication", "AAA* medication", 0.0676, 0.0800),
    ("checkup_purpose", "Check-up purpose", 0.0535, 0.1100),
    ("er_planned", "ER:Planned", 0.0519, 0.0677),
    ("visual_impairment", "(Ref.) Vis. impair.", 0.2464, 0.2131),
]


def table_v_profile() -> GeneratorProfile:
    named = [
        VariableLaw("patient_age", NUMERIC, Law.normal(68.3, 12.0), Law.normal(56.8, 18.0),
                    (0.0, 120.0), "Patient age"),
        VariableLaw("patient_mo", NUMERIC, Law.normal(825.4, 144.0), Law.normal(687.5, 216.0),
                    (0.0, 1440.0), "Patient #mo"),
    ]
    named += [VariableLaw(name, BINARY, Law.bernoulli(f), Law.bernoulli(nf), None, label)
              for name, label, f, nf in _TABLE_V_BINARY]
    named.append(VariableLaw("height", NUMERIC, Law.normal(156.0, 9.0), Law.normal(152.7, 9.0),
                             (40.0, 210.0), "(Ref.) height"))
    return GeneratorProfile(tuple(named), 1213, 101986, TOTAL_VARIABLES - len(named))


def generate(profile: GeneratorProfile, scale: float = 1.0, seed: int = 0) -> Dataset:
    """Sample round(scale * count) rows per class, then shuffle row order."""
    if not 0.0 < scale <= 1.0:
        raise ValueError(f"scale must lie in (0, 1], got {scale}")
    n_pos = round_half_up(scale * profile.positives)
    n_neg = round_half_up(scale * profile.negatives)
    if n_pos < 2 or n_neg < 2:
        raise ValueError(f"scale {scale} leaves fewer than 2 rows in a class ({n_pos}, {n_neg})")
    variables = profile.all_variables()
    X = np.empty((n_pos + n_neg, len(variables)))
    for j, var in enumerate(variables):
        for label, law, rows in ((1, var.fall, slice(0, n_pos)), (0, var.nofall, slice(n_pos, None))):
            rng = derive_rng(seed, "synth", label, var.name)
            col = law.sample(rng, n_pos if label else n_neg)
            if var.clamp is not None:
                col = np.clip(col, *var.clamp)
            X[rows, j] = col
    y = np.concatenate([np.ones(n_pos, dtype=np.int8), np.zeros(n_neg, dtype=np.int8)])
    perm = derive_rng(seed, "synth-order").permutation(X.shape[0])
    return Dataset(profile.schema(), X[perm], y[perm])
