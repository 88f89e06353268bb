import pandas as pd

from conftest import run_cmd_and_assert_exit_code, reformat_cmd_output


def test_generate_tasks(inputs_dir):
    out = inputs_dir / "out"
    result = run_cmd_and_assert_exit_code(
        f"generate-tasks --seeds {inputs_dir / 'seeds.csv'} "
        f"--allowlist {inputs_dir / 'allowlist.txt'} --n-subsets 9 --seed 1 --out {out}"
    )
    assert reformat_cmd_output(result.output, deserialize=True) == [
        {"relation": "HYP", "targets": 1, "sentences": 7},
        {"relation": "HPO", "targets": 1, "sentences": 4},
        {"relation": "HOL", "targets": 1, "sentences": 7},
        {"relation": "MER", "targets": 1, "sentences": 6},
        {"relation": "ANT", "targets": 2, "sentences": 18},
        {"relation": "SYN", "targets": 2, "sentences": 14},
    ]
    tasks = pd.read_csv(out / "tasks.csv")
    assert len(tasks) == 56
    assert sorted(tasks["subset"].unique()) == list(range(1, 10))
    assert not tasks.duplicated(["subset", "relation", "target"]).any()
    targets = pd.read_csv(out / "target_words.csv")
    assert targets[targets["relation"] == "ANT"]["target"].tolist() == ["night", "daytime"]


def test_generate_tasks_is_seeded(inputs_dir):
    args = (
        f"generate-tasks --seeds {inputs_dir / 'seeds.csv'} "
        f"--allowlist {inputs_dir / 'allowlist.txt'} --n-subsets 10 --seed 4"
    )
    run_cmd_and_assert_exit_code(f"{args} --out {inputs_dir / 'a'}")
    run_cmd_and_assert_exit_code(f"{args} --out {inputs_dir / 'b'}")
    first = (inputs_dir / "a" / "tasks.csv").read_bytes()
    assert first == (inputs_dir / "b" / "tasks.csv").read_bytes()


def test_generate_tasks_infeasible(inputs_dir):
    result = run_cmd_and_assert_exit_code(
        f"generate-tasks --seeds {inputs_dir / 'seeds.csv'} "
        f"--allowlist {inputs_dir / 'allowlist.txt'} --n-subsets 8 --out {inputs_dir / 'out'}",
        exit_code=1,
    )
    assert "Error" in result.output


def test_generate_tasks_missing_settings(inputs_dir):
    result = run_cmd_and_assert_exit_code(
        f"generate-tasks --seeds {inputs_dir / 'seeds.csv'}", exit_code=1
    )
    assert "Missing setting(s): allowlist_file." in reformat_cmd_output(result.output)


def test_generate_tasks_bad_n_subsets(inputs_dir):
    run_cmd_and_assert_exit_code(
        f"generate-tasks --seeds {inputs_dir / 'seeds.csv'} --n-subsets 0", exit_code=2
    )
