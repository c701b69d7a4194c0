import json

import numpy as np
import pytest

from gammainterp.config import DEFAULT_GRIDS, DEFAULT_TOL
from gammainterp.errors import DegenerateDataError
from gammainterp.problem import InterpProblem, dumps
from gammainterp.rational import BlaschkeProduct


class TestConfig:
    def test_update_keeps_other_fields(self):
        tol = DEFAULT_TOL.updated({"extremal": 1e-7})
        assert tol.extremal == 1e-7
        assert tol.eig == DEFAULT_TOL.eig
        assert DEFAULT_TOL.extremal == 1e-6

    def test_none_is_identity(self):
        assert DEFAULT_GRIDS.updated(None) == DEFAULT_GRIDS

    def test_unknown_key(self):
        with pytest.raises(ValueError):
            DEFAULT_TOL.updated({"nonsense": 1})


class TestProblem:
    def test_validation(self):
        with pytest.raises(DegenerateDataError):
            InterpProblem([0, 1.0], [0, 0], [0, 0])
        with pytest.raises(DegenerateDataError):
            InterpProblem([0.1, 0.1], [0, 0], [0, 0])
        with pytest.raises(DegenerateDataError):
            InterpProblem([0.1, 0.2], [0], [0, 0])

    def test_round_trip_is_exact(self):
        rng = np.random.default_rng(0)
        z = rng.uniform(-0.5, 0.5, 6) + 1j * rng.uniform(-0.5, 0.5, 6)
        prob = InterpProblem(z[:3], z[3:], z[3:] ** 2)
        back = InterpProblem.from_dict(json.loads(prob.dumps()))
        assert np.array_equal(back.nodes, prob.nodes)
        assert np.array_equal(back.s, prob.s) and np.array_equal(back.p, prob.p)

    def test_overrides_round_trip(self):
        m = BlaschkeProduct(-1, (0,))
        prob = InterpProblem([0.3, -0.2, 0.4j], [0] * 3, [0] * 3, DEFAULT_TOL.updated({"extremal": 1e-7}),
                             DEFAULT_GRIDS.updated({"radial": 8}), fixed_m=m)
        d = json.loads(prob.dumps())
        assert d["overrides"]["tolerances"] == {"extremal": 1e-7}
        back = InterpProblem.from_dict(d)
        assert back.tol.extremal == 1e-7 and back.grids.radial == 8
        assert abs(back.fixed_m(0.3) + 0.3) < 1e-15 and back.fixed_q is None

    def test_defaults_are_not_written(self):
        assert "overrides" not in InterpProblem([0.1], [0], [0]).to_dict()

    def test_malformed(self):
        with pytest.raises(DegenerateDataError):
            InterpProblem.from_dict({"version": "gamma-interp/1", "nodes": [[0, 0]]})
        with pytest.raises(DegenerateDataError):
            InterpProblem.from_dict({"version": "gamma-interp/1", "nodes": [[0, 0, 1]],
                                     "targets": [{"s": [0, 0], "p": [0, 0]}]})

    def test_permuted(self):
        prob = InterpProblem([0.1, 0.2, 0.3], [0.1, 0.2, 0.3], [0, 0, 0])
        assert np.allclose(prob.permuted([2, 0, 1]).s, [0.3, 0.1, 0.2])


def test_dumps_handles_numpy_and_complex():
    text = dumps({"a": np.float64(0.1), "b": np.int64(3), "c": 1 + 2j, "d": np.array([1.0, 2.0])})
    assert json.loads(text) == {"a": 0.1, "b": 3, "c": [1.0, 2.0], "d": [1.0, 2.0]}
