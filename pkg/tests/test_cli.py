import subprocess
import sys

import pytest

from listpack.cli import main
from listpack.formats import parse_certificate, parse_packing


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fixture_file(capsys, tmp_path, name, *extra):
    path = tmp_path / (name + "-".join(extra))
    code, _, _ = run(capsys, "fixture", name, *extra, "-o", str(path))
    assert code == 0
    return str(path)


def test_validate_cover_ok_and_bad(capsys, tmp_path):
    q3 = fixture_file(capsys, tmp_path, "q3")
    assert run(capsys, "validate-cover", q3)[:2] == (0, "ok\n")
    bad = tmp_path / "bad.cover"
    bad.write_text("cover v1\ngraph 2\nedge 1 2\nlist 1 2\nlist 2 2\nmatch 1 2 1 1\nmatch 1 2 1 2\n")
    code, out, _ = run(capsys, "validate-cover", str(bad))
    assert code == 1 and "not a matching" in out


def test_pathwidth3_caterpillar_pack_and_verify(capsys, tmp_path):
    cover = fixture_file(capsys, tmp_path, "figure2")
    graph = fixture_file(capsys, tmp_path, "figure2", "--what", "graph")
    decomp = fixture_file(capsys, tmp_path, "figure2", "--what", "decomp")
    out = tmp_path / "fig2.pack"
    code, _, err = run(capsys, "pack", "caterpillar", "--graph", graph, "--cover", cover, "--decomp", decomp, "-o", str(out))
    assert code == 0 and "24 colourings" in err
    _, d = parse_packing(out.read_text())
    assert len(d.weights) == 24
    assert run(capsys, "verify-packing", str(out), "--cover", cover)[:2] == (0, "ok\n")


def test_tampered_packing_lists_colour(capsys, tmp_path):
    cover = fixture_file(capsys, tmp_path, "figure2")
    decomp = fixture_file(capsys, tmp_path, "figure2", "--what", "decomp")
    out = tmp_path / "p"
    run(capsys, "pack", "caterpillar", "--cover", cover, "--decomp", decomp, "-o", str(out))
    lines = out.read_text().splitlines()
    weights = [i for i, l in enumerate(lines) if l.startswith("weight")]
    lines[weights[0]] = lines[weights[0]].replace("1/24", "1/12")
    lines[weights[1]] = lines[weights[1]].replace("1/24", "0/1")
    out.write_text("\n".join(lines) + "\n")
    code, text, _ = run(capsys, "verify-packing", str(out), "--cover", cover)
    assert code == 1 and "colour" in text


def test_wrong_cover_digest(capsys, tmp_path):
    cover = fixture_file(capsys, tmp_path, "figure2")
    decomp = fixture_file(capsys, tmp_path, "figure2", "--what", "decomp")
    out = tmp_path / "p"
    run(capsys, "pack", "caterpillar", "--cover", cover, "--decomp", decomp, "-o", str(out))
    other = fixture_file(capsys, tmp_path, "random", "--n", "10", "--k", "4")
    code, text, _ = run(capsys, "verify-packing", str(out), "--cover", other)
    assert code == 1 and "digest" in text


def test_q3_lp_infeasible_and_chif(capsys, tmp_path):
    q3 = fixture_file(capsys, tmp_path, "q3")
    code, out, _ = run(capsys, "pack", "lp", "--cover", q3)
    assert code == 1 and out.startswith("infeasible") and "verified" in out
    cert = tmp_path / "q3.cert"
    code, out, _ = run(capsys, "chif", "--graph", q3, "--certify", str(cert))
    assert (code, out) == (0, "3+1/5\n")
    value, _, dual = parse_certificate(cert.read_text())
    assert str(value) == "16/5" and dual.value == value


def test_uncorrected_45_vertex_graph_is_four(capsys, tmp_path):
    g = fixture_file(capsys, tmp_path, "appendix-b", "--printed")
    assert run(capsys, "chif", "--graph", g)[:2] == (0, "4\n")


def test_other_pack_methods(capsys, tmp_path):
    cover = fixture_file(capsys, tmp_path, "random", "--n", "5", "--k", "4", "--p", "0.4", "--seed", "3")
    assert run(capsys, "pack", "treedepth", "--cover", cover)[0] == 0
    assert run(capsys, "pack", "lp", "--cover", cover)[0] == 0
    layers = tmp_path / "layers"
    layers.write_text("layers v1\nlayer 1: 1 2 3 4 5\n")
    assert run(capsys, "pack", "layered", "--cover", cover, "--layers", str(layers))[0] == 0


def test_product_pack(capsys, tmp_path):
    g1 = tmp_path / "g1"
    g1.write_text("p edge 2 1\ne 1 2\n")
    g2 = tmp_path / "g2"
    g2.write_text("p edge 3 2\ne 1 2\ne 2 3\n")
    cover = tmp_path / "c"
    edges = [(1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 5), (5, 6)]
    cover.write_text("cover v1\ngraph 6\n" + "".join(f"edge {u} {v}\n" for u, v in edges)
                     + "".join(f"list {v} 3\n" for v in range(1, 7)))
    code, _, _ = run(capsys, "pack", "product", "--cover", str(cover), "--g1", str(g1), "--g2", str(g2), "--k1", "2", "--tree")
    assert code == 0


def test_flex_report(capsys, tmp_path):
    cover = fixture_file(capsys, tmp_path, "random", "--n", "6", "--k", "4", "--p", "0.3", "--seed", "1")
    code, out, _ = run(capsys, "flex", "--cover", cover, "--degeneracy", "2")
    assert code == 0 and "# min" in out and out.startswith("packing v1")


def test_decompose(capsys, tmp_path):
    g = fixture_file(capsys, tmp_path, "figure2", "--what", "graph")
    code, out, _ = run(capsys, "decompose", "pathwidth", g)
    assert code == 0 and out.startswith("caterpillar p=3")
    code, out, _ = run(capsys, "decompose", "treedepth", g)
    assert code == 0 and out.startswith("forest")


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "chif", "--graph", str(tmp_path / "missing"))[0] == 2
    junk = tmp_path / "junk"
    junk.write_text("hello\n")
    assert run(capsys, "chif", "--graph", str(junk))[0] == 2
    cover = fixture_file(capsys, tmp_path, "figure2")
    assert run(capsys, "pack", "caterpillar", "--cover", cover)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["pack", "nope"])
    assert exc.value.code == 2


def test_wrong_graph_for_cover(capsys, tmp_path):
    cover = fixture_file(capsys, tmp_path, "figure2")
    q3 = fixture_file(capsys, tmp_path, "q3", "--what", "graph")
    assert run(capsys, "pack", "lp", "--cover", cover, "--graph", q3)[0] == 1


def test_fixture_output_is_byte_identical(capsys):
    for name in ("q3", "appendix-b", "figure2", "cyclic-shift"):
        a = run(capsys, "fixture", name)[1]
        b = run(capsys, "fixture", name)[1]
        assert a == b and a


def test_entry_point_pipe():
    fx = subprocess.run([sys.executable, "-m", "listpack.cli", "fixture", "q3", "--what", "graph"], capture_output=True, check=True)
    out = subprocess.run([sys.executable, "-m", "listpack.cli", "chif"], input=fx.stdout, capture_output=True, check=True)
    assert out.stdout == b"3+1/5\n"
