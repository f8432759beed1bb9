import re

import pytest

from stopkit.cli.manifest import Job, load_manifest, parse_manifest
from stopkit.exceptions import ManifestError


def test_n_list_expands_pattern():
    manifest = parse_manifest(
        {
            "defaults": {"seed": 42, "runs": 1000},
            "job": [
                {
                    "command": "simulate",
                    "strategy": "gm",
                    "n": [3, 5, 10],
                    "output": "sim_{n}.csv",
                }
            ],
        }
    )
    assert [job.n for job in manifest.jobs] == [3, 5, 10]
    assert [job.output for job in manifest.jobs] == ["sim_3.csv", "sim_5.csv", "sim_10.csv"]
    assert all(job.seed == 42 for job in manifest.jobs)


def test_job_overrides_defaults():
    manifest = parse_manifest(
        {
            "defaults": {"format": "json"},
            "job": [{"command": "cutoffs", "strategy": "naive", "n": 4, "output": "a", "format": "csv"}],
        }
    )
    assert manifest.jobs[0].format == "csv"


@pytest.mark.parametrize(
    "entry, message",
    [
        ({"command": "simulate", "n": 3, "output": "x"}, "explicit seed"),
        ({"command": "cutoffs", "n": 3}, "output is required"),
        ({"command": "launch", "output": "x"}, "unknown command"),
        ({"command": "cutoffs", "n": 3, "output": "x", "colour": "red"}, "unknown fields"),
        ({"command": "cutoffs", "n": [2, 3], "output": "x.csv"}, "{n}"),
        ({"command": "cutoffs", "n": 0, "output": "x"}, "positive integer"),
    ],
)
def test_invalid_jobs(entry, message):
    with pytest.raises(ManifestError, match=re.escape(message)):
        parse_manifest({"job": [entry]})


def test_empty_manifest():
    with pytest.raises(ManifestError):
        parse_manifest({})


def test_job_to_argv():
    job = Job(
        command="compare",
        output="cmp.csv",
        n=100,
        strategies=("naive", "gm"),
        runs=1_000_000,
        seed=7,
        strict=True,
    )
    assert job.to_argv() == [
        "compare",
        "--strategies",
        "naive",
        "gm",
        "-n",
        "100",
        "--runs",
        "1000000",
        "--seed",
        "7",
        "--strict",
        "--output",
        "cmp.csv",
    ]


def test_optimize_job_carries_budget():
    manifest = parse_manifest(
        {
            "job": [
                {"command": "optimize", "n": 20, "max_iterations": 50, "output": "opt.json"}
            ]
        }
    )
    job = manifest.jobs[0]
    assert job.max_iterations == 50
    argv = job.to_argv()
    assert argv[argv.index("--max-iterations") + 1] == "50"


def test_plot_job_to_argv():
    job = Job(command="plot-data", output="f.csv", n=10, figure="cutoffs", strategies=("gm",))
    assert job.to_argv()[:4] == ["plot-data", "cutoffs", "--strategies", "gm"]


def test_load_manifest(tmp_path):
    path = tmp_path / "m.toml"
    path.write_text('[[job]]\ncommand = "asymptote"\noutput = "asym.json"\n')
    manifest = load_manifest(path)
    assert manifest.source == path
    assert manifest.jobs[0].command == "asymptote"


def test_load_manifest_syntax_error(tmp_path):
    path = tmp_path / "m.toml"
    path.write_text("[[job]\n")
    with pytest.raises(ManifestError, match="m.toml"):
        load_manifest(path)
