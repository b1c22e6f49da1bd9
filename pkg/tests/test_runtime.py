"""Tests for runtime modules: extraction, mas_cache, paths."""

import json
from unittest.mock import patch

import pytest

import runtime.extraction as extraction
import runtime.mas_cache as mas_cache
import runtime.paths as paths
from src.core.mas import build_mas, save_admissible_set
from src.core.params import load_params


class TestExtraction:
    """Tests for extraction module"""

    def test_extract_default_params_copies_file(self, tmp_path):
        """Test that the shipped parameter document is copied verbatim"""
        dest = tmp_path / "nested" / "params.json"
        extraction.extract_default_params(dest)
        assert dest.read_bytes() == paths.default_params_path().read_bytes()

    def test_extracted_template_loads(self, tmp_path, params):
        dest = tmp_path / "params.json"
        extraction.extract_default_params(dest)
        assert load_params(dest.read_text(encoding="utf-8")) == params

    def test_existing_file_is_not_replaced(self, tmp_path):
        dest = tmp_path / "params.json"
        dest.write_text("edited", encoding="utf-8")
        with pytest.raises(FileExistsError, match="--force"):
            extraction.extract_default_params(dest)
        assert dest.read_text(encoding="utf-8") == "edited"

    def test_overwrite_replaces_file(self, tmp_path):
        dest = tmp_path / "params.json"
        dest.write_text("edited", encoding="utf-8")
        assert extraction.extract_default_params(dest, overwrite=True) == dest
        assert dest.read_bytes() == paths.default_params_path().read_bytes()


class TestPaths:
    """Tests for paths module"""

    def test_runtime_root(self):
        """Test that runtime_root returns the correct path"""
        root = paths.runtime_root()
        assert root.exists()
        assert root.is_dir()
        assert (root / "src").is_dir()

    def test_default_params_path(self):
        path = paths.default_params_path()
        assert path.name == "default_params.json"
        assert json.loads(path.read_text(encoding="utf-8"))["format"] == "h2gov-params"


class TestMasCache:
    """Tests for mas_cache module"""

    def test_builds_and_saves_when_missing(self, scalar_model, tmp_path):
        path = tmp_path / "cache" / "omega.json"
        omega = mas_cache.ensure_admissible_set(scalar_model, 1.0, -1.0, 0.01, path=path)
        assert path.exists()
        assert omega.j_star == 0

    def test_reuses_matching_cache(self, scalar_model, tmp_path):
        path = tmp_path / "omega.json"
        save_admissible_set(build_mas(scalar_model, 1.0, -1.0, 0.01), path)
        with patch("runtime.mas_cache.build_mas") as mock_build:
            omega = mas_cache.ensure_admissible_set(scalar_model, 1.0, -1.0, 0.01, path=path)
        mock_build.assert_not_called()
        assert omega.rows == 4

    def test_rebuilds_stale_cache(self, scalar_model, tmp_path):
        path = tmp_path / "omega.json"
        save_admissible_set(build_mas(scalar_model, 1.0, -1.0, 0.01), path)
        omega = mas_cache.ensure_admissible_set(scalar_model, 1.0, -1.0, 0.02, path=path)
        assert omega.epsilon == 0.02
        assert json.loads(path.read_text(encoding="utf-8"))["epsilon"] == 0.02

    def test_rebuilds_unreadable_cache(self, scalar_model, tmp_path):
        path = tmp_path / "omega.json"
        path.write_text("{broken", encoding="utf-8")
        omega = mas_cache.ensure_admissible_set(scalar_model, 1.0, -1.0, 0.01, path=path)
        assert omega.rows == 4
        assert json.loads(path.read_text(encoding="utf-8"))["j_star"] == 0
