import pytest

from conftest import TOY_SYNSETS, run_cmd_and_assert_exit_code, reformat_cmd_output


def test_parse_check(wordnet_dir, graph):
    result = run_cmd_and_assert_exit_code(f"parse-check --wordnet-dir {wordnet_dir}")
    summary = reformat_cmd_output(result.output, deserialize=True)
    total = len(TOY_SYNSETS)
    assert summary == {
        "synsets": total,
        "lemmas": len(graph.lemma_index),
        "hypernym": round((total - 1) / total, 4),
        "holonym": round(3 / total, 4),
        "meronym": round(2 / total, 4),
    }


def test_parse_check_yaml(wordnet_dir):
    result = run_cmd_and_assert_exit_code(
        f"parse-check --wordnet-dir {wordnet_dir} --format yaml"
    )
    assert f"synsets: {len(TOY_SYNSETS)}" in result.output


def test_parse_check_from_config(tmp_path, wordnet_dir):
    config = tmp_path / "run.yaml"
    config.write_text(f"wordnet-dir: {wordnet_dir}\n", encoding="utf-8")
    result = run_cmd_and_assert_exit_code(f"parse-check -c {config}")
    assert reformat_cmd_output(result.output, deserialize=True)["synsets"] == len(TOY_SYNSETS)


@pytest.mark.parametrize(
    ("args", "message"),
    [("", "Missing setting(s): wordnet_dir."), ("--wordnet-dir missing", "does not exist")],
)
def test_parse_check_error(args, message):
    result = run_cmd_and_assert_exit_code(f"parse-check {args}", exit_code=1)
    assert message in reformat_cmd_output(result.output)


def test_parse_check_bad_format(wordnet_dir):
    run_cmd_and_assert_exit_code(
        f"parse-check --wordnet-dir {wordnet_dir} --format xml", exit_code=2
    )
