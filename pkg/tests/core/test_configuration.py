import pytest

from pathlib import Path

from wn_align.core.configuration import RunConfig, ScorerSpec, load_config
from wn_align.exceptions import ConfigError


def test_default_config():
    config = load_config()
    assert config == RunConfig()
    assert config.output_dir == Path("results")
    assert (config.threshold_step, config.seed, config.alpha) == (0.01, 42, 0.05)
    assert (config.n_subsets, config.n_unrelated) == (276, 30000)
    assert config.scorer == ScorerSpec()


def test_load_config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "wordnet-dir: wn\nresponses: data/responses.tsv\nout: /tmp/out\n"
        "seed: '7'\nscorer: external:scores.csv\nalpha: 0.01\n",
        encoding="utf-8",
    )
    config = load_config(path)
    assert config.wordnet_dir == tmp_path / "wn"
    assert config.responses_file == tmp_path / "data" / "responses.tsv"
    assert config.output_dir == Path("/tmp/out")
    assert config.seed == 7
    assert config.alpha == 0.01
    assert config.scorer == ScorerSpec("external", Path("scores.csv"))


def test_overrides_take_precedence(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("seed: 7\nwordnet_dir: wn\nn_unrelated: 10\n", encoding="utf-8")
    config = load_config(path, {"seed": 9, "wordnet_dir": "other", "n_unrelated": None})
    assert config.seed == 9
    assert config.wordnet_dir == Path("other")
    assert config.n_unrelated == 10


def test_empty_config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("", encoding="utf-8")
    assert load_config(path) == RunConfig()


@pytest.mark.parametrize(
    ("content", "message"),
    [
        ("- seed\n- 7\n", "must hold a mapping"),
        ("seed: [7\n", "is not valid YAML"),
        ("colour: red\n", "Unknown configuration key 'colour'"),
        ("seed: many\n", "expects a number"),
        ("scorer: sbert\n", "is not a scorer"),
        ("alpha: 1.5\n", "alpha must lie in (0, 1)"),
        ("threshold_step: 0\n", "threshold_step must lie in (0, 1]"),
        ("n_subsets: 0\n", "n_subsets must be positive"),
        ("n_unrelated: -1\n", "n_unrelated must not be negative"),
    ],
)
def test_load_config_invalid(tmp_path, content, message):
    path = tmp_path / "run.yaml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError) as error:
        load_config(path)
    assert message in error.value.message


def test_load_config_unreadable(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path)


def test_require():
    config = RunConfig(wordnet_dir=Path("wn"))
    config.require("wordnet_dir")
    with pytest.raises(ConfigError) as error:
        config.require("wordnet_dir", "responses_file", "seeds_file")
    assert error.value.message == "Missing setting(s): responses_file, seeds_file."


def test_to_dict_and_digest():
    config = RunConfig(wordnet_dir=Path("wn"), scorer=ScorerSpec("external", Path("s.csv")))
    values = config.to_dict()
    assert values["wordnet_dir"] == "wn"
    assert values["scorer"] == "external:s.csv"
    assert values["responses_file"] is None
    same = load_config(overrides={"wordnet_dir": "wn", "scorer": "external:s.csv"})
    assert config.digest() == same.digest()
    assert config.digest() != RunConfig().digest()
    assert len(config.digest()) == 64


@pytest.mark.parametrize("value", ["baseline", "external:a.csv"])
def test_scorer_spec_str(value):
    assert str(ScorerSpec.parse(value)) == value
