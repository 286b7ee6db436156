import subprocess
import sys

import pytest

from shuttleqec.cli import main
from shuttleqec.gf2codes import build_golay
from shuttleqec.shuttle import parse_network

FAST = ["--steps-per-temperature", "100", "--temperature-levels", "10", "--reheat-cycles", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(ln.split("=", 1) for ln in text.splitlines() if "=" in ln)


def layout_size(path):
    line = next(ln for ln in path.read_text().splitlines() if ln.startswith("layout "))
    return len(line.split()) - 1


class TestBuild:
    def test_golay(self, capsys, tmp_path):
        out_file = tmp_path / "g.net"
        code, out, _ = run(capsys, "build", "--code", "golay", "--out", str(out_file), "--format", "kv")
        assert code == 0
        d = kv(out)
        assert (d["gates"], d["depth"], d["first_step"], d["steady"]) == ("89", "8", "12", "11")
        assert layout_size(out_file) == 35
        assert parse_network(out_file.read_text()).logical().depth == 8

    def test_bch(self, capsys, tmp_path):
        out_file = tmp_path / "b.net"
        code, out, _ = run(capsys, "build", "--code", "bch127", "--out", str(out_file), "--format", "kv")
        assert code == 0
        assert layout_size(out_file) == 127 + 78
        assert kv(out)["first_step"] == "78"

    def test_generation(self, capsys):
        code, out, _ = run(capsys, "build", "--kind", "generation", "--format", "kv")
        assert code == 0 and kv(out)["gates"] == "77"

    def test_not_dual_containing(self, capsys, tmp_path):
        bad = tmp_path / "bad.h"
        bad.write_text("2 4\n1100\n1010\n")
        code, out, err = run(capsys, "build", "--code", f"file:{bad}")
        assert code == 1 and out == ""
        assert "dual" in err.lower()

    def test_file_code(self, capsys, tmp_path):
        h = tmp_path / "golay.h"
        h.write_text(build_golay().H.to_text())
        code, out, _ = run(capsys, "build", "--code", f"file:{h}", "--format", "kv")
        assert code == 0 and kv(out)["gates"] == "89"

    def test_unknown_code(self, capsys):
        code, _, err = run(capsys, "build", "--code", "hamming")
        assert code == 1 and "hamming" in err


class TestOptimize:
    def test_seed_byte_identical(self, capsys, tmp_path):
        outs = []
        for i in range(2):
            net, tr = tmp_path / f"o{i}.net", tmp_path / f"o{i}.trace"
            code, out, _ = run(capsys, "optimize", "--seed", "7", "--out", str(net), "--trace", str(tr), *FAST)
            assert code == 0
            outs.append((out, net.read_bytes(), tr.read_bytes()))
        assert outs[0] == outs[1]
        assert outs[0][2].decode().startswith("# cycle temperature max_s j_max rms best_max best_rms")

    def test_chains_best_of(self, capsys):
        code, out, _ = run(capsys, "optimize", "--seed", "1", "--chains", "3", "--format", "kv", *FAST)
        assert code == 0
        d = kv(out)
        objs = [tuple(float(x) for x in o.split("/")) for o in d["chain_objectives"].split()]
        assert (float(d["max"]), float(d["j_max"]), float(d["rms"])) == pytest.approx(min(objs), abs=1e-4)

    def test_resume_from_network(self, capsys, tmp_path):
        first = tmp_path / "a.net"
        run(capsys, "optimize", "--seed", "3", "--out", str(first), *FAST)
        before = kv(run(capsys, "stats", "--network", str(first), "--format", "kv")[1])
        code, out, _ = run(capsys, "optimize", "--network", str(first), "--format", "kv", "--initial-temperature", "1e-9", *FAST)
        assert code == 0
        after = kv(out)
        assert (int(after["max"]), int(after["j_max"])) <= (int(before["max"]), int(before["j_max"]))

    def test_bad_chains(self, capsys):
        assert run(capsys, "optimize", "--chains", "0")[0] == 1

    def test_bad_anneal_value(self, capsys):
        code, _, err = run(capsys, "optimize", "--cooling-factor", "1.5", *FAST)
        assert code == 1 and "cooling_factor" in err


class TestConfig:
    def test_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# quick run\nseed = 7\nsteps-per-temperature = 100\ntemperature_levels = 10\nreheat_cycles = 2\nformat = kv\n")
        code, out, _ = run(capsys, "optimize", "--config", str(cfg))
        assert code == 0 and kv(out)["seed"] == "7"
        code, out, _ = run(capsys, "optimize", "--config", str(cfg), "--seed", "8")
        assert kv(out)["seed"] == "8"

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("temprature = 3\n")
        code, _, err = run(capsys, "optimize", "--config", str(cfg))
        assert code == 1 and "unknown key 'temprature'" in err

    def test_bad_value(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("kind = sideways\n")
        code, _, err = run(capsys, "build", "--config", str(cfg))
        assert code == 1 and "kind" in err


class TestStatsCostRender:
    def test_roundtrip_across_commands(self, capsys, tmp_path):
        net, stats, svg = tmp_path / "g.net", tmp_path / "g.stats", tmp_path / "g.svg"
        _, build_out, _ = run(capsys, "build", "--out", str(net), "--format", "kv")
        code, stats_out, _ = run(capsys, "stats", "--network", str(net), "--format", "kv", "--out", str(stats))
        assert code == 0 and stats_out == build_out == stats.read_text()
        code, cost_out, _ = run(capsys, "cost", "--stats", str(stats), "--format", "kv")
        assert code == 0 and kv(cost_out)["swap_s_bar"] == kv(build_out)["mean"].rstrip("0").rstrip(".")
        code, out, _ = run(capsys, "render", "--network", str(net), "--out", str(svg))
        assert code == 0 and "35 lines" in out
        assert svg.read_text().count('class="qubit"') == 35

    def test_cost_22(self, capsys):
        code, out, _ = run(capsys, "cost", "--sbar", "22", "--format", "kv")
        d = kv(out)
        assert code == 0
        assert d["swap_factor"] == "22" and d["swap_factor_headline"] == "~20"
        assert d["swap_gate_precision"] == "4.55e-06"
        assert d["models_coincide"] == "no"
        assert d["concat_outer_vertical_separation"] == "66 .. 110"
        assert d["concat_outer_reduction_root"] == "110^0.25 = 3.24"
        assert d["concat_overall_factor_headline"] == "~10 to 20"
        assert d["concat_outer_horizontal_mean"] == "50"

    def test_cost_one(self, capsys):
        d = kv(run(capsys, "cost", "--sbar", "1", "--format", "kv")[1])
        assert d["models_coincide"] == "yes"
        assert d["swap_gate_precision"] == d["transport_gate_precision"]

    def test_cost_text_and_D(self, capsys):
        code, out, _ = run(capsys, "cost", "--D", "30")
        assert code == 0 and "VIOLATED" in out and "order-of-magnitude" in out

    def test_missing_stats_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "cost", "--stats", str(tmp_path / "nope.stats"))
        assert code == 1 and "nope.stats" in err

    def test_stats_needs_network(self, capsys):
        assert run(capsys, "stats")[0] == 1

    def test_corrupt_network(self, capsys, tmp_path):
        p = tmp_path / "x.net"
        p.write_text("qec-shuttle v1\nbits 2 0\nlayout 0 1\n1 0 1 R 3\n")
        code, _, err = run(capsys, "stats", "--network", str(p))
        assert code == 1 and "replay" in err

    def test_render_stdout(self, capsys):
        code, out, _ = run(capsys, "render")
        assert code == 0 and out.startswith("<?xml")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shuttleqec", "cost", "--sbar", "22", "--format", "kv"],
                          capture_output=True, text=True, check=True)
    assert "swap_factor_headline=~20" in proc.stdout
