import json
import subprocess
import sys

import pytest

from permlat.cli import main
from permlat.formats import (dump_lattice, dump_perm, dump_structure, load_lattice,
                             load_manifest, load_perm, load_structure)
from permlat.lattice import boolean2, chain_lattice, m3


@pytest.fixture
def fixtures(tmp_path):
    (tmp_path / "m3.lat").write_text(dump_lattice(m3()))
    (tmp_path / "chain2.lat").write_text(dump_lattice(chain_lattice(2, ["0", "1"])))
    (tmp_path / "chain3.lat").write_text(dump_lattice(chain_lattice(3, ["0", "E", "1"])))
    (tmp_path / "b2.lat").write_text(dump_lattice(boolean2()))
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


# -- formats -----------------------------------------------------------------


def test_lattice_file_round_trips(fixtures):
    lat = load_lattice(fixtures / "b2.lat")
    assert lat.elements == ("0", "a", "b", "1")
    assert dump_lattice(lat) == (fixtures / "b2.lat").read_text()


def test_structure_file_round_trips(fixtures, tmp_path):
    from permlat.generic import GenerationConfig, generate_generic
    lat = load_lattice(fixtures / "chain3.lat")
    s = generate_generic(lat, [("0", "E"), ("E", "1")],
                         GenerationConfig(seed=5, target_size=8, saturation_depth=2),
                         with_saturation_report=False).structure
    text = dump_structure(s, lattice_ref="chain3.lat")
    path = fixtures / "s.struct"
    path.write_text(text)
    space, orders = load_structure(path)
    assert space == s.space
    assert tuple(orders) == s.orders


def test_perm_file_round_trips(tmp_path):
    from permlat.permstruct import PermStructure
    p = PermStructure(("a", "b", "c"), ((0, 1, 2), (2, 0, 1)))
    path = tmp_path / "x.perm"
    path.write_text(dump_perm(p))
    assert load_perm(path) == p


def test_malformed_lattice_file_is_a_clean_error(tmp_path, capsys):
    bad = tmp_path / "bad.lat"
    bad.write_text("cover: a < b\n")
    code, _ = run(["lattice", "check", bad], capsys)
    assert code == 1


# -- exit codes ---------------------------------------------------------------


def test_lattice_check_m3_exits_1_with_witness(fixtures, capsys):
    code, out = run(["lattice", "check", fixtures / "m3.lat", "--json"], capsys)
    assert code == 1
    payload = json.loads(out)
    assert payload["validation"]["ok"]
    assert payload["distributive"] is False
    assert len(payload["witness"]) == 5


def test_lattice_check_chain_exits_0(fixtures, capsys):
    code, _ = run(["lattice", "check", fixtures / "chain3.lat"], capsys)
    assert code == 0


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["lattice", "frobnicate"])
    assert e.value.code == 2


def test_space_probe_m3_exits_1(fixtures, capsys):
    code, out = run(["space", "probe", fixtures / "m3.lat", "--max-base", "3"], capsys)
    assert code == 1
    assert "failure" in out


def test_space_probe_chain_exits_0(fixtures, capsys):
    code, _ = run(["space", "probe", fixtures / "chain2.lat", "--max-base", "2"], capsys)
    assert code == 0


# -- generation pipeline ------------------------------------------------------


def test_gen_is_byte_deterministic(fixtures, capsys):
    args = ["gen", "--lattice", fixtures / "chain3.lat", "--orders", "0:E,E:1",
            "--size", "15", "--depth", "2", "--seed", "7", "--no-report"]
    code, _ = run(args + ["--out", fixtures / "a.struct"], capsys)
    assert code == 0
    code, _ = run(args + ["--out", fixtures / "b.struct"], capsys)
    assert code == 0
    assert (fixtures / "a.struct").read_bytes() == (fixtures / "b.struct").read_bytes()


def test_manifest_written_and_rerunnable(fixtures, capsys):
    out = fixtures / "g.struct"
    code, _ = run(["gen", "--lattice", fixtures / "chain3.lat", "--orders", "0:E,E:1",
                   "--size", "12", "--depth", "2", "--seed", "3", "--no-report",
                   "--out", out], capsys)
    assert code == 0
    manifest = load_manifest(str(out) + ".manifest")
    assert manifest["command"] == "gen"
    first = out.read_bytes()
    cfg = manifest["config"]
    code, _ = run(["gen", "--lattice", cfg["lattice"], "--orders", cfg["orders"],
                   "--size", cfg["size"], "--depth", cfg["depth"],
                   "--seed", cfg["seed"], "--no-report", "--out", out], capsys)
    assert code == 0
    assert out.read_bytes() == first


def test_full_pipeline_gen_encode_decode(fixtures, capsys):
    struct = fixtures / "p.struct"
    run(["gen", "--lattice", fixtures / "chain3.lat", "--orders", "0:E,E:1",
         "--size", "20", "--depth", "2", "--seed", "1", "--no-report",
         "--out", struct], capsys)
    code, _ = run(["sq", "check", struct], capsys)
    assert code == 0
    perm = fixtures / "p.perm"
    code, _ = run(["encode", "--in", struct, "--seed", "2", "--out", perm], capsys)
    assert code == 0
    code, out = run(["decode", "--in", perm, "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["relation_count"] == 3
    assert payload["distributive"] is True
    assert payload["lattice_hasse"]
    code, _ = run(["check", "ext", "--in", struct, "--k", "2"], capsys)
    assert code == 0
    code, _ = run(["profile", "--in", perm, "--k", "2"], capsys)
    assert code == 0


def test_json_output_is_stable_across_runs(fixtures, capsys):
    code, out1 = run(["lattice", "bounds", fixtures / "chain3.lat", "--json"], capsys)
    code, out2 = run(["lattice", "bounds", fixtures / "chain3.lat", "--json"], capsys)
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["lower"] == 2 and payload["upper"] == 2


def test_amalgam_command(fixtures, capsys):
    base = fixtures / "base.struct"
    f1 = fixtures / "f1.struct"
    f2 = fixtures / "f2.struct"
    base.write_text("lattice: chain3.lat\npoints: b\n")
    f1.write_text("lattice: chain3.lat\npoints: b x\nd: b x E\n")
    f2.write_text("lattice: chain3.lat\npoints: b y\nd: b y 1\n")
    code, out = run(["space", "amalgam", base, f1, f2, "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert "d: x y 1" in payload["structure"]


def test_sq_compose_and_split_commands(fixtures, capsys):
    struct = fixtures / "c.struct"
    run(["gen", "--lattice", fixtures / "chain3.lat", "--orders", "0:E,E:1",
         "--size", "10", "--depth", "2", "--seed", "4", "--no-report",
         "--out", struct], capsys)
    composed = fixtures / "composed.struct"
    code, _ = run(["sq", "compose", struct, "--lo", "0", "--hi", "1",
                   "--out", composed], capsys)
    assert code == 0
    space, orders = load_structure(composed)
    assert orders[0].bottom == "0" and orders[0].top == "1"
    code, _ = run(["sq", "split", composed, "--order", "0", "--at", "E",
                   "--out", fixtures / "split.struct"], capsys)
    assert code == 0
    space2, orders2 = load_structure(fixtures / "split.struct")
    assert (orders2[0].bottom, orders2[0].top) == ("0", "E")
    assert (orders2[1].bottom, orders2[1].top) == ("E", "1")


def test_entry_point_runs():
    result = subprocess.run([sys.executable, "-m", "permlat.cli", "--version"],
                            capture_output=True, text=True)
    assert result.returncode == 0
