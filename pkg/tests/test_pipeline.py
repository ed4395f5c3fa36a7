from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from netimmune.pipeline import PipelineError, run_pipeline


def make_tree_fixture(root: Path, n_trees=6, users=40, seed=0) -> Path:
    """Synthetic propagation trees in the public dataset layout."""
    rng = np.random.Generator(np.random.PCG64(seed))
    tree_dir = root / "tree"
    tree_dir.mkdir(parents=True, exist_ok=True)
    for t in range(n_trees):
        src_user = f"u{rng.integers(0, users)}"
        lines = [f"['ROOT', 'ROOT', '0.0']->['{src_user}', 'tw{t}', '0.0']"]
        frontier = [(src_user, f"tw{t}")]
        for _ in range(rng.integers(5, 14)):
            pu, pt = frontier[rng.integers(0, len(frontier))]
            cu = f"u{rng.integers(0, users)}"
            ct = f"tw{t}_{rng.integers(0, 10_000)}"
            delay = float(rng.random() * 100)
            lines.append(f"['{pu}', '{pt}', '0.0']->['{cu}', '{ct}', '{delay:.2f}']")
            frontier.append((cu, ct))
        (tree_dir / f"{t}.txt").write_text("\n".join(lines) + "\n")
    return tree_dir


def make_harmful_fixture(root: Path, users=40, count=8, seed=1) -> Path:
    rng = np.random.Generator(np.random.PCG64(seed))
    chosen = rng.choice(users, size=count, replace=False)
    path = root / "harmful.txt"
    path.write_text("".join(f"u{int(u)}\n" for u in chosen))
    return path


@pytest.fixture
def tree_config(tmp_path):
    tree_dir = make_tree_fixture(tmp_path)
    harmful = make_harmful_fixture(tmp_path)
    config = {
        "trees": str(tree_dir),
        "harmful": str(harmful),
        "fraction": 1.0,
        "algorithm": "sparseshield",
        "k": 5,
        "p": 0.2,
        "trials": 50,
        "master_seed": 7,
        "output_dir": str(tmp_path / "out"),
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    return config_path


class TestRun:
    def test_full_run_produces_artifacts(self, tree_config):
        manifest = run_pipeline(tree_config)
        out = Path(manifest["config"]["output_dir"])
        plan = json.loads((out / "plan.json").read_text())
        report = json.loads((out / "report.json").read_text())
        assert plan["algorithm"] == "sparseshield"
        assert len(plan["blocked"]) == 5
        assert report["saved"] >= 0.0
        assert "trees" in manifest["input_hashes"]
        assert (out / "manifest.json").exists()

    def test_k_zero_saves_nothing(self, tree_config, tmp_path):
        config = json.loads(tree_config.read_text())
        config["k"] = 0
        config["output_dir"] = str(tmp_path / "out0")
        path = tmp_path / "c0.json"
        path.write_text(json.dumps(config))
        manifest = run_pipeline(path)
        report = json.loads((Path(config["output_dir"]) / "report.json").read_text())
        assert report["saved"] == 0.0

    def test_missing_tree_directory_names_stage(self, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"trees": str(tmp_path / "nope"), "k": 1,
                                      "output_dir": str(tmp_path / "o")}))
        with pytest.raises(PipelineError, match="^ingest:"):
            run_pipeline(config)

    def test_rerun_from_manifest_is_byte_identical(self, tree_config, tmp_path):
        manifest = run_pipeline(tree_config)
        out = Path(manifest["config"]["output_dir"])
        first = {name: (out / name).read_bytes()
                 for name in ("plan.json", "report.json", "manifest.json")}
        rerun = run_pipeline(out / "manifest.json")
        assert rerun == manifest
        for name, content in first.items():
            assert (out / name).read_bytes() == content

    def test_edge_list_input_with_sampling(self, tmp_path):
        edges = tmp_path / "edges.txt"
        rng = np.random.Generator(np.random.PCG64(5))
        lines = [f"n{i}\tn{i + 1}" for i in range(99)]
        lines += [f"n{rng.integers(0, 100)}\tn{rng.integers(0, 100)}" for _ in range(150)]
        edges.write_text("\n".join(lines) + "\n")
        harmful = tmp_path / "harm.txt"
        harmful.write_text("n1\nn5\nn50\n")
        config = tmp_path / "c.json"
        config.write_text(json.dumps({
            "edges": str(edges), "harmful": str(harmful), "fraction": 0.5,
            "algorithm": "netshield", "k": 4, "p": 0.3, "trials": 30,
            "master_seed": 3, "output_dir": str(tmp_path / "out")}))
        manifest = run_pipeline(config)
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["graph_stats"]["n"] == 50
        assert report["saved"] >= 0.0
        assert manifest["config"]["sample_seed"] is not None

    def test_unknown_algorithm_names_stage(self, tmp_path):
        edges = tmp_path / "e.txt"
        edges.write_text("a\tb\n")
        config = tmp_path / "c.json"
        config.write_text(json.dumps({"edges": str(edges), "algorithm": "pagerank",
                                      "k": 1, "output_dir": str(tmp_path / "o")}))
        with pytest.raises(PipelineError, match="^immunize:"):
            run_pipeline(config)

    def test_config_requires_one_input(self, tmp_path):
        config = tmp_path / "c.json"
        config.write_text(json.dumps({"k": 1, "output_dir": str(tmp_path / "o")}))
        with pytest.raises(PipelineError, match="^ingest:"):
            run_pipeline(config)

    def test_random_algorithm_runs(self, tree_config, tmp_path):
        config = json.loads(tree_config.read_text())
        config["algorithm"] = "random"
        config["output_dir"] = str(tmp_path / "outr")
        path = tmp_path / "cr.json"
        path.write_text(json.dumps(config))
        run_pipeline(path)
        plan = json.loads((Path(config["output_dir"]) / "plan.json").read_text())
        assert plan["algorithm"] == "random"
        assert "seed" in plan
