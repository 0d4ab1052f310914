import json

import numpy as np
import pytest

from incident_bench.data_model import BINARY, NUMERIC
from incident_bench.synth import GeneratorProfile, Law, VariableLaw, filler_laws, generate, table_v_profile


def test_table_v_profile_shape():
    p = table_v_profile()
    assert (p.positives, p.negatives) == (1213, 101986)
    names = [v.name for v in p.all_variables()]
    assert len(names) == len(set(names)) == 172
    assert p.schema().label_name == "fall"


def test_calibrated_laws_match_printed_means():
    p = table_v_profile()
    age = p.law("patient_age")
    assert (age.fall.mean, age.nofall.mean) == (68.3, 56.8)
    mo = p.law("patient_mo")
    assert (mo.fall.mean, mo.nofall.mean) == (825.4, 687.5)
    gyn = p.law("gynecology")
    assert (gyn.fall.mean, gyn.nofall.mean) == (0.022, 0.0998)


def test_fillers_are_label_independent():
    for law in filler_laws(40):
        assert law.fall == law.nofall
        assert law.kind in (NUMERIC, BINARY)


def test_generate_counts_and_determinism():
    p = table_v_profile()
    a = generate(p, 0.05, seed=1)
    assert (a.positives, a.negatives) == (61, 5099)
    assert a.fingerprint() == generate(p, 0.05, seed=1).fingerprint()
    assert a.fingerprint() != generate(p, 0.05, seed=2).fingerprint()


def test_generated_means_near_laws():
    data = generate(table_v_profile(), 0.25, seed=0)
    age = data.X[:, data.column_index("patient_age")]
    assert abs(age[data.labels == 0].mean() - 56.8) < 0.5
    assert abs(age[data.labels == 1].mean() - 68.3) < 2.5
    assert age.min() >= 0.0 and age.max() <= 120.0


def test_scale_validation():
    with pytest.raises(ValueError):
        generate(table_v_profile(), 0.0)
    with pytest.raises(ValueError):
        generate(table_v_profile(), 1.5)
    with pytest.raises(ValueError):
        generate(table_v_profile(), 1e-4)


def test_profile_json_roundtrip(tmp_path):
    p = GeneratorProfile(
        [VariableLaw("x", NUMERIC, Law.normal(1.0, 2.0), Law.normal(0.0, 1.0), (0.0, 5.0))],
        positives=10, negatives=30, filler_count=3,
    )
    path = tmp_path / "p.json"
    path.write_text(json.dumps(p.to_dict()))
    again = GeneratorProfile.load(path)
    assert again.to_dict() == p.to_dict()
    d = generate(again, 1.0, 0)
    assert d.width == 4
    assert np.all((d.X[:, 0] >= 0) & (d.X[:, 0] <= 5))
