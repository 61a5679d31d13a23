from __future__ import annotations

import pytest

from argclean.config import RunConfig, config_to_toml, load_config
from argclean.errors import ConfigError


def write(tmp_path, content):
    path = tmp_path / "config.toml"
    path.write_text(content, encoding="utf-8")
    return str(path)


class TestLoadConfig:
    def test_defaults_are_paper_operating_point(self):
        config = RunConfig()
        assert config.scoring == "counts"
        assert config.stopword_mode == "without_stopwords"
        assert (config.m, config.n_min, config.n_max) == (100, 1, 5)
        assert config.tau == 0.95
        assert (config.min_freq_irrelevance, config.min_freq_relevance) == (200, 2000)
        assert config.sample_fraction == 0.1

    def test_sections_map_to_fields(self, tmp_path):
        path = write(
            tmp_path,
            """
[corpus]
path = "c.jsonl"
format = "generic_jsonl"

[bootstrap]
tau = 0.9
min_freq_irrelevance = 50

[run]
workers = 4
cleanse_to_fixpoint = true
""",
        )
        config = load_config(path)
        assert config.corpus_path == "c.jsonl"
        assert config.tau == 0.9
        assert config.min_freq_irrelevance == 50
        assert config.workers == 4
        assert config.cleanse_to_fixpoint is True

    def test_unknown_key_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(write(tmp_path, "[run]\nworker_count = 2\n"))

    def test_unknown_section_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown top-level"):
            load_config(write(tmp_path, "[extra]\nx = 1\n"))

    def test_invalid_tau_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="tau"):
            load_config(write(tmp_path, "[bootstrap]\ntau = 0.0\n"))

    def test_invalid_toml_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="invalid TOML"):
            load_config(write(tmp_path, "not toml ["))

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "nope.toml"))

    def test_field_mapping_table(self, tmp_path):
        path = write(
            tmp_path,
            '[corpus]\nfield_mapping = { "id" = "key", "premises" = "body" }\n',
        )
        config = load_config(path)
        assert config.field_mapping == {"id": "key", "premises": "body"}


class TestConfigToToml:
    def test_round_trip_of_non_defaults(self, tmp_path):
        original = RunConfig(
            corpus_path="x.jsonl",
            tau=0.9,
            workers=3,
            field_mapping={"id": "key"},
            cleanse_to_fixpoint=True,
        )
        path = tmp_path / "config.toml"
        path.write_text(config_to_toml(original), encoding="utf-8")
        reloaded = load_config(str(path))
        assert reloaded == original
