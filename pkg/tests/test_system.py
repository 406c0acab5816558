import json

import pytest

from foldatlas.algebra import Poly3, VectorField3
from foldatlas.errors import (
    DegreeCapExceededError,
    EmptyBoxError,
    MalformedDocumentError,
    NonFiniteCoefficientError,
    PreconditionError,
)
from foldatlas.system import (
    Box,
    PiecewiseSystem,
    build_normal_form,
    load_system,
    serialize_system,
    validate,
)


def normal_form_doc(alpha=-1.0, beta=-1.0, gamma=1.0, delta=-1.0):
    return json.dumps(
        {
            "name": "elliptic",
            "box": [-1, 1, -1, 1, -1, 1],
            "X": {
                "cx": [[[0, 0, 0], alpha]],
                "cy": [[[0, 0, 0], 1.0]],
                "cz": [[[0, 1, 0], delta]],
            },
            "Y": {
                "cx": [[[0, 0, 0], gamma]],
                "cy": [[[0, 0, 0], beta]],
                "cz": [[[1, 0, 0], 1.0]],
            },
        }
    )


class TestLoadSystem:
    def test_normal_form_descriptor(self):
        system = load_system(normal_form_doc())
        assert system.X.cx == Poly3.constant(-1.0)
        assert system.X.cy == Poly3.constant(1.0)
        assert system.X.cz == Poly3({(0, 1, 0): -1.0})
        assert system.Y.cx == Poly3.constant(1.0)
        assert system.Y.cy == Poly3.constant(-1.0)
        assert system.Y.cz == Poly3({(1, 0, 0): 1.0})

    def test_constant_fields(self):
        doc = json.dumps(
            {
                "name": "const",
                "box": [-1, 1, -1, 1, -1, 1],
                "X": {"cx": [[[0, 0, 0], 1.0]], "cy": [], "cz": [[[0, 0, 0], -1.0]]},
                "Y": {"cx": [], "cy": [[[0, 0, 0], 1.0]], "cz": [[[0, 0, 0], 1.0]]},
            }
        )
        system = load_system(doc)
        assert system.X.eval_at((0.3, 0.4, 0.0)) == (1.0, 0.0, -1.0)
        assert system.Y.eval_at((0.3, 0.4, 0.0)) == (0.0, 1.0, 1.0)

    def test_nan_coefficient_rejected(self):
        doc = normal_form_doc().replace("-1.0", "NaN", 1)
        with pytest.raises(NonFiniteCoefficientError):
            load_system(doc)

    def test_malformed_json(self):
        with pytest.raises(MalformedDocumentError):
            load_system("{not json")

    def test_missing_keys(self):
        with pytest.raises(MalformedDocumentError):
            load_system(json.dumps({"name": "x"}))

    def test_degree_cap(self):
        doc = json.loads(normal_form_doc())
        doc["X"]["cx"] = [[[9, 0, 0], 1.0]]
        with pytest.raises(DegreeCapExceededError):
            load_system(json.dumps(doc))

    def test_empty_box(self):
        doc = json.loads(normal_form_doc())
        doc["box"] = [1, -1, -1, 1, -1, 1]
        with pytest.raises(EmptyBoxError):
            load_system(json.dumps(doc))
        doc["box"] = [-1, 1, -1, 1, 0.5, 1]  # no slice of {z=0}
        with pytest.raises(EmptyBoxError):
            load_system(json.dumps(doc))

    def test_bad_exponent(self):
        doc = json.loads(normal_form_doc())
        doc["X"]["cx"] = [[[-1, 0, 0], 1.0]]
        with pytest.raises(MalformedDocumentError):
            load_system(json.dumps(doc))

    def test_round_trip_bitwise(self):
        system = load_system(normal_form_doc(alpha=-0.1234567890123456))
        text = serialize_system(system)
        again = load_system(text)
        assert again.X.cx.terms == system.X.cx.terms
        assert serialize_system(again) == text


class TestBuildNormalForm:
    def test_symbolic_invariants(self):
        for delta in (-1.0, 1.0):
            for gamma in (-2.0, 0.5, 1.0):
                system = build_normal_form(0.7, -1.3, gamma, delta)
                assert system.xf == Poly3({(0, 1, 0): delta})
                residual = system.yf - Poly3.variable("x")
                if not residual.is_zero():
                    assert min(sum(e) for e in residual.terms) >= 2
                assert system.x2f.eval_at((0, 0, 0)) == delta
                assert system.y2f.eval_at((0, 0, 0)) == gamma

    def test_hot_terms_preserve_jet(self):
        hot = {"cx": [[[0, 0, 1], 0.3]], "cy": [[[1, 0, 0], -0.2]], "cz": [[[1, 1, 0], 0.5]]}
        system = build_normal_form(-1.0, -1.0, 1.0, -1.0, hot=hot)
        assert system.y2f.eval_at((0, 0, 0)) == 1.0
        assert system.xyf.eval_at((0, 0, 0)) == -1.0
        assert system.yxf.eval_at((0, 0, 0)) == 1.0

    def test_gamma_zero_rejected(self):
        with pytest.raises(PreconditionError):
            build_normal_form(1.0, 1.0, 0.0, -1.0)

    def test_bad_delta(self):
        with pytest.raises(PreconditionError):
            build_normal_form(1.0, 1.0, 1.0, 2.0)

    def test_hot_order_validation(self):
        with pytest.raises(PreconditionError):
            build_normal_form(1.0, 1.0, 1.0, -1.0, hot={"cz": [[[1, 0, 0], 0.1]]})
        with pytest.raises(PreconditionError):
            build_normal_form(1.0, 1.0, 1.0, -1.0, hot={"cx": [[[0, 0, 0], 0.1]]})


class TestValidate:
    def test_clean_normal_form(self):
        report = validate(build_normal_form(-1.0, -1.0, 1.0, -1.0))
        assert report.ok()

    def test_vanishing_field_warning(self):
        X = VectorField3(
            Poly3.variable("x"), Poly3.variable("y"), Poly3.variable("z")
        )
        Y = VectorField3(Poly3.constant(0), Poly3.constant(0), Poly3.constant(1))
        system = PiecewiseSystem(X, Y, name="vanishing")
        report = validate(system)
        assert any("X vanishes" in w for w in report.warnings)
        assert report.vanishing_points["X"]

    def test_degenerate_box_warning(self):
        system = PiecewiseSystem(
            build_normal_form(-1, -1, 1, -1).X,
            build_normal_form(-1, -1, 1, -1).Y,
            box=Box(-1, 1, -1, 1, 0.0, 0.0),
        )
        report = validate(system)
        assert any("volume" in w for w in report.warnings)
