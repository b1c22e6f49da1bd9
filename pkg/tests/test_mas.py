"""Tests for the admissible set construction in src/core/mas.py"""

import json

import numpy as np
import pytest

from src.core.lti import LtiModel
from src.core.mas import (
    AdmissibleSet,
    admissible_set_from_document,
    admissible_set_to_document,
    build_mas,
    load_admissible_set,
    save_admissible_set,
)
from src.utils.errors import AdmissibleSetFormatError, LinearModelError, MasDeterminationError


def _sample_members(omega, rng, count, scale, v_scale, batch=20000, max_batches=50):
    members_x, members_v = [], []
    for _ in range(max_batches):
        x = rng.uniform(-1.0, 1.0, size=(batch, omega.n_states)) * scale
        v = rng.uniform(-v_scale, v_scale, size=batch)
        inside = np.all(omega.hx @ x.T + omega.hv @ v[None, :] <= omega.h[:, None], axis=0)
        members_x.append(x[inside])
        members_v.append(v[inside])
        if sum(len(m) for m in members_v) >= count:
            break
    return np.vstack(members_x)[:count], np.concatenate(members_v)[:count]


class TestScalarModels:
    """Tests on first-order models with known admissible sets."""

    def test_contraction_without_input(self):
        model = LtiModel(a=[[0.5]], b=[[0.0]], c=[[1.0]], d=[[0.0]], ts=1.0)
        omega = build_mas(model, 1.0, None, 0.01)
        assert omega.j_star == 0
        assert omega.rows == 2
        assert omega.y_lower is None

    def test_two_sided_bounds(self, scalar_model):
        omega = build_mas(scalar_model, 1.0, -1.0, 0.01)
        assert omega.j_star == 0
        assert omega.rows == 4
        # Steady state gain is 2, so the tightened bound is |v| <= 0.495
        assert omega.contains([0.0], 0.495, tol=1e-12)
        assert not omega.contains([0.0], 0.496)
        assert omega.contains([1.0], 0.0)
        assert not omega.contains([1.01], 0.0)

    def test_matches_simulation_grid(self, scalar_model):
        omega = build_mas(scalar_model, 1.0, -1.0, 0.01)
        xs, vs = np.meshgrid(np.linspace(-1.5, 1.5, 200), np.linspace(-0.7, 0.7, 200))
        x, v = xs.ravel(), vs.ravel()

        inside = np.all(omega.hx @ x[None, :] + omega.hv @ v[None, :] <= omega.h[:, None], axis=0)

        ok = np.abs(2.0 * v) <= 0.99
        y = x.copy()
        for _ in range(500):
            ok &= np.abs(y) <= 1.0
            y = 0.5 * y + v
        np.testing.assert_array_equal(inside, ok)

    def test_horizon_cap(self, discrete_model):
        with pytest.raises(MasDeterminationError):
            build_mas(discrete_model, 1.0, -1.0, 0.01, horizon_cap=1)

    @pytest.mark.parametrize(
        "y_upper,y_lower,epsilon",
        [(1.0, -1.0, 0.0), (0.01, -0.01, 0.01)],
        ids=["zero_epsilon", "no_room"],
    )
    def test_invalid_bounds(self, scalar_model, y_upper, y_lower, epsilon):
        with pytest.raises(LinearModelError):
            build_mas(scalar_model, y_upper, y_lower, epsilon)

    def test_unstable_model(self, suppress_logging):
        model = LtiModel(a=[[1.2]], b=[[1.0]], c=[[1.0]], d=[[0.0]], ts=1.0)
        with pytest.raises(LinearModelError):
            build_mas(model, 1.0, -1.0, 0.01)


class TestShippedSet:
    """Tests on the admissible set of the shipped pressure model."""

    def test_finitely_determined(self, omega, discrete_model):
        assert 0 < omega.j_star <= 200
        assert omega.rows == 2 * (omega.j_star + 2)
        assert omega.model_digest == discrete_model.digest()
        assert omega.y_upper == pytest.approx(0.95)
        assert omega.y_lower == pytest.approx(-0.95)

    def test_steady_state_rows_come_first(self, omega):
        np.testing.assert_array_equal(omega.hx[:2], np.zeros((2, 3)))
        np.testing.assert_allclose(omega.h[:2], [0.94, 0.94])
        np.testing.assert_allclose(omega.hx[2:4], [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])

    def test_zero_rows_are_satisfiable(self, omega):
        zero = np.all(omega.hx == 0.0, axis=1) & (omega.hv[:, 0] == 0.0)
        assert np.all(omega.h[zero] >= 0.0)

    def test_equilibrium_is_strictly_inside(self, omega):
        assert np.all(omega.margins(np.zeros(3), 0.0) > 0.0)

    def test_members_never_violate(self, omega, discrete_model, rng):
        """Members of the set hold both pressure bounds for 2000 steps."""
        x, v = _sample_members(omega, rng, 1000, scale=np.array([0.8, 2.0, 2.0]), v_scale=6.0)
        assert len(v) == 1000

        a, b = discrete_model.a, discrete_model.b[:, 0]
        state = x.T
        for _ in range(2000):
            y = state[0]
            assert np.all(y <= omega.y_upper + 1e-6)
            assert np.all(y >= omega.y_lower - 1e-6)
            state = a @ state + b[:, None] * v[None, :]

    def test_pressure_limit_set_is_finitely_determined(self, discrete_model):
        full = build_mas(discrete_model, 1.0, -1.0, 0.01)
        assert 0 < full.j_star <= 200
        assert full.rows == 2 * (full.j_star + 2)

    def test_margin_shrinks_the_set(self, omega, discrete_model, rng):
        full = build_mas(discrete_model, 1.0, -1.0, 0.01)
        x, v = _sample_members(omega, rng, 200, scale=np.array([0.8, 2.0, 2.0]), v_scale=6.0)
        assert all(full.contains(xi, vi) for xi, vi in zip(x, v))
        assert not omega.contains(np.array([0.97, 0.0, 0.0]), 0.0)

    def test_normalized_rows(self, omega):
        hx, hv, h = omega.normalized
        norms = np.linalg.norm(np.hstack([hx, hv]), axis=1)
        nonzero = np.linalg.norm(np.hstack([omega.hx, omega.hv]), axis=1) > 0.0
        np.testing.assert_allclose(norms[nonzero], 1.0)


class TestSerialization:
    """Tests for the admissible set document."""

    def test_save_and_load(self, omega, tmp_path):
        path = tmp_path / "sets" / "omega.json"
        save_admissible_set(omega, path)
        loaded = load_admissible_set(path)
        np.testing.assert_array_equal(loaded.hx, omega.hx)
        np.testing.assert_array_equal(loaded.hv, omega.hv)
        np.testing.assert_array_equal(loaded.h, omega.h)
        assert loaded.j_star == omega.j_star
        assert loaded.epsilon == omega.epsilon
        assert loaded.model_digest == omega.model_digest

    def test_one_sided_document(self):
        model = LtiModel(a=[[0.5]], b=[[0.0]], c=[[1.0]], d=[[0.0]], ts=1.0)
        omega = build_mas(model, 1.0, None, 0.01)
        loaded = admissible_set_from_document(json.loads(json.dumps(admissible_set_to_document(omega))))
        assert loaded.y_lower is None
        assert loaded.rows == omega.rows

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda doc: doc.update(format="other"),
            lambda doc: doc.update(version=99),
            lambda doc: doc.pop("rows"),
            lambda doc: doc.update(rows=[[1.0, 2.0]]),
            lambda doc: doc.update(j_star="many"),
        ],
        ids=["format", "version", "missing_rows", "short_rows", "bad_j_star"],
    )
    def test_malformed_documents(self, scalar_model, mutate):
        doc = admissible_set_to_document(build_mas(scalar_model, 1.0, -1.0, 0.01))
        mutate(doc)
        with pytest.raises(AdmissibleSetFormatError):
            admissible_set_from_document(doc)

    def test_not_an_object(self):
        with pytest.raises(AdmissibleSetFormatError):
            admissible_set_from_document([1, 2, 3])

    def test_missing_file(self, tmp_path):
        with pytest.raises(AdmissibleSetFormatError):
            load_admissible_set(tmp_path / "missing.json")

    def test_mismatched_rows_rejected(self):
        with pytest.raises(LinearModelError):
            AdmissibleSet(
                hx=np.zeros((2, 1)),
                hv=np.zeros((2, 1)),
                h=np.zeros(3),
                j_star=0,
                epsilon=0.01,
                y_upper=1.0,
                y_lower=None,
                model_digest="",
            )
