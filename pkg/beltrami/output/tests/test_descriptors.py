import json
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from beltrami.config.pipeline_config import PipelineConfig
from beltrami.errors.beltrami_errors import DescriptorIOError
from beltrami.lib.r3_fields.atoms import BesselAtomField, PlaneWaveAtomField
from beltrami.lib.s3.tests.fixtures import lifted_field, random_sphere_points
from beltrami.lib.t3.torus_field import TorusBeltramiField
from beltrami.output.descriptors import (
    DESCRIPTOR_TYPES,
    load_descriptor,
    save_descriptor,
)
from beltrami.output.provenance import BELTRAMI_VERSION, provenance


def torus_pair() -> TorusBeltramiField:
    amplitude = np.array([0.0, 0.5, 0.5j])
    return TorusBeltramiField(
        1, [[1, 0, 0], [-1, 0, 0]], [amplitude, np.conj(amplitude)]
    )


class TestDescriptors:
    def test_s3_field(self, tmp_path: Path) -> None:
        """
        Test a saved S^3 field evaluates identically after loading, with its
        extras and provenance.
        """
        field = lifted_field(6)
        record = provenance("build", PipelineConfig())
        path = save_descriptor(
            tmp_path / "field.json",
            field,
            record,
            base_points=[[0, 0, 0, 1]],
        )
        descriptor = load_descriptor(path)
        assert descriptor.kind == "s3_beltrami"
        assert descriptor.extras == {"base_points": [[0, 0, 0, 1]]}
        assert descriptor.provenance == record
        p = random_sphere_points(20)
        assert_allclose(descriptor.source(p), field(p), rtol=0, atol=0)
        assert descriptor.source.eigenvalue == 8.0

    @pytest.mark.parametrize(
        "field",
        [
            torus_pair(),
            BesselAtomField([[0.5, 0.0, 0.0]], [[1.0, 2.0, 3.0]], 4.0),
            PlaneWaveAtomField([[0.0, 0.0, 1.0]], [[1.0 + 2j, 0.5j, -1.0]]),
        ],
    )
    def test_r3_and_torus_fields(self, field, tmp_path: Path) -> None:
        """
        Test the other descriptor types rebuild equal fields.
        """
        path = save_descriptor(tmp_path / "field.json", field, {})
        loaded = load_descriptor(path).source
        assert loaded.descriptor() == field.descriptor()
        x = np.random.default_rng(0).uniform(-1, 1, (10, 3))
        assert_allclose(loaded(x), field(x), rtol=0, atol=0)

    def test_registered_types(self) -> None:
        """
        Test every constructed field type has a reader.
        """
        assert sorted(DESCRIPTOR_TYPES) == [
            "bessel_atoms",
            "plane_waves",
            "s3_beltrami",
            "t3_beltrami",
        ]

    def test_missing_file(self, tmp_path: Path) -> None:
        """
        Test a missing descriptor is an I/O error naming its path.
        """
        path = tmp_path / "missing.json"
        with pytest.raises(DescriptorIOError) as error:
            load_descriptor(path)
        assert error.value.path == str(path)
        assert str(path) in str(error.value)

    @pytest.mark.parametrize(
        "content",
        [
            "{not json",
            json.dumps({"type": "klein_bottle"}),
            json.dumps({"type": "t3_beltrami"}),
            json.dumps(
                {
                    "type": "t3_beltrami",
                    "norm_squared": 2,
                    "modes": [
                        {"k": [1, 0, 0], "c_re": [0] * 3, "c_im": [0] * 3}
                    ],
                }
            ),
        ],
    )
    def test_invalid_content(self, content: str, tmp_path: Path) -> None:
        """
        Test malformed files, unknown types, missing entries and invalid
        fields are all I/O errors.
        """
        path = tmp_path / "field.json"
        path.write_text(content)
        with pytest.raises(DescriptorIOError):
            load_descriptor(path)


class TestProvenance:
    def test_record(self) -> None:
        """
        Test the record carries the version, verb, seed and the resolved
        configuration as compact JSON.
        """
        config = PipelineConfig(seed=7)
        record = provenance("trace", config)
        assert record["version"] == str(BELTRAMI_VERSION)
        assert record["verb"] == "trace"
        assert record["seed"] == 7
        assert json.loads(record["config"]) == config.as_dict()
        assert "\n" not in record["config"]
