import json

import pytest

from convexspectra import cli, geometry
from convexspectra.errors import BodyParseError, BodyValidationError
from convexspectra.geometry import ConvexPolygon, GraphBody

from conftest import write_body


@pytest.fixture
def square_file(tmp_path, square):
    return write_body(tmp_path / "square.json", square)


@pytest.fixture
def hexagon_file(tmp_path, hexagon_h0):
    return write_body(tmp_path / "hexagon.json", hexagon_h0)


@pytest.fixture
def octagon_file(tmp_path, octagon):
    return write_body(tmp_path / "octagon.json", octagon)


@pytest.fixture
def disc_file(tmp_path, disc_body):
    return write_body(tmp_path / "disc.json", disc_body)


# --- file parsing -----------------------------------------------------------


def test_parse_polygon_file(square_file):
    body = cli.parse_body_file(square_file)
    assert isinstance(body, ConvexPolygon)
    assert body.area == pytest.approx(1.0, abs=1e-15)


def test_parse_graph_file(disc_file):
    body = cli.parse_body_file(disc_file)
    assert isinstance(body, GraphBody)


def test_parse_rejects_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(BodyParseError, match="not valid JSON"):
        cli.parse_body_file(str(p))


def test_parse_rejects_unknown_type(tmp_path):
    p = tmp_path / "odd.json"
    p.write_text(json.dumps({"type": "blob"}))
    with pytest.raises(BodyParseError, match=r"\$\.type"):
        cli.parse_body_file(str(p))


def test_parse_rejects_bad_vertex(tmp_path):
    p = tmp_path / "v.json"
    p.write_text(json.dumps({"type": "polygon",
                             "vertices": [[0, 0], [1, 0], ["x", 1]]}))
    with pytest.raises(BodyParseError, match=r"\$\.vertices\[2\]"):
        cli.parse_body_file(str(p))


def test_parse_rejects_nonconvex(tmp_path):
    p = tmp_path / "nc.json"
    p.write_text(json.dumps({"type": "polygon",
                             "vertices": [[0, 0], [2, 0], [1, 0.1],
                                          [2, 2], [0, 2]]}))
    with pytest.raises(BodyValidationError, match=r"\$\.vertices"):
        cli.parse_body_file(str(p))


def test_parse_rejects_bad_descriptor(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"type": "graph", "a": -0.5, "b": 0.5,
                             "f": {"kind": "wavelet"}, "g": {"kind": "tent"}}))
    with pytest.raises(BodyParseError, match=r"\$\.f"):
        cli.parse_body_file(str(p))


def test_parse_lattice_rows_are_matrix_rows():
    lat = cli.parse_lattice("1 0; -0.4 0.8")
    # columns of the row matrix are the generators
    assert (lat.g1.x, lat.g1.y) == (1.0, -0.4)
    assert (lat.g2.x, lat.g2.y) == (0.0, 0.8)


def test_parse_lattice_rejects_malformed():
    with pytest.raises(BodyParseError):
        cli.parse_lattice("1 0 0; 0 1")
    with pytest.raises(BodyParseError):
        cli.parse_lattice("1 0")
    with pytest.raises(BodyValidationError):
        cli.parse_lattice("1 0; 2 0")  # singular


# --- subcommands ------------------------------------------------------------


def test_ft_square_known_value(square_file, capsys):
    rc = cli.main(["ft", "--body", square_file, "--xi", "0.5,0.5"])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0.405285"


def test_ft_writes_csv_and_manifest(square_file, tmp_path, capsys):
    out = str(tmp_path / "ft.csv")
    rc = cli.main(["ft", "--body", square_file, "--xi", "0.5,0.5",
                   "--xi", "1.25,0", "--out", out])
    assert rc == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "xi1,xi2,re,im,abs_err,method,converged"
    assert len(lines) == 3
    man = json.load(open(out + ".manifest.json"))
    assert man["command"] == "ft"
    assert "tolerances" in man and "versions" in man and "wall_time_s" in man


def test_csv_reruns_are_byte_identical(square_file, tmp_path, capsys):
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    argv = ["zeros", "--body", square_file, "--xi", "0.25,0", "--xi", "5.5,0"]
    assert cli.main(argv + ["--out", out1]) == 0
    assert cli.main(argv + ["--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_zeros_square_axis_segment(square_file, capsys):
    rc = cli.main(["zeros", "--body", square_file,
                   "--xi", "0.25,0", "--xi", "5.5,0"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "5 zeros on segment" in out


def test_spectrum_check_square_integer_lattice(square_file, capsys):
    rc = cli.main(["spectrum-check", "--body", square_file,
                   "--lattice", "1 0; 0 1", "--radius", "10"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("pass")


def test_spectrum_check_detects_bad_lattice(square_file, capsys):
    rc = cli.main(["spectrum-check", "--body", square_file,
                   "--lattice", "1.1 0; 0 1", "--radius", "10"])
    assert rc == 1
    assert capsys.readouterr().out.startswith("fail")


def test_spectrum_check_hexagon_dual(hexagon_file, capsys):
    rc = cli.main(["spectrum-check", "--body", hexagon_file,
                   "--lattice", "1 0; -0.4 0.8", "--radius", "10"])
    assert rc == 0


def test_density_integer_lattice(capsys):
    rc = cli.main(["density", "--lattice", "1 0; 0 1", "--radius", "10"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "D+ 441" in out and "D- 400" in out


def test_gap_check_pass_and_fail(square_file, capsys):
    assert cli.main(["gap-check", "--body", square_file,
                     "--lattice", "1 0; 0 1"]) == 0
    assert cli.main(["gap-check", "--body", square_file,
                     "--lattice", "10 0; 0 10"]) == 1


def test_tile_check_default_lattice(square_file, hexagon_file, capsys):
    assert cli.main(["tile-check", "--body", square_file]) == 0
    assert cli.main(["tile-check", "--body", hexagon_file]) == 0
    out = capsys.readouterr().out
    assert "pass" in out


def test_tile_check_octagon_fails(octagon_file, capsys):
    rc = cli.main(["tile-check", "--body", octagon_file])
    assert rc == 1
    assert "property check failed" in capsys.readouterr().err


def test_tile_check_covolume_mismatch_is_input_error(square_file, capsys):
    rc = cli.main(["tile-check", "--body", square_file,
                   "--lattice", "2 0; 0 1"])
    assert rc == 2


def test_classify_labels(square_file, hexagon_file, octagon_file, disc_file,
                         capsys):
    assert cli.main(["classify", "--body", square_file]) == 0
    assert capsys.readouterr().out.strip() == "spectral symmetric_quadrilateral"
    assert cli.main(["classify", "--body", hexagon_file]) == 0
    assert capsys.readouterr().out.strip() == "spectral symmetric_hexagon"
    assert cli.main(["classify", "--body", octagon_file]) == 1
    assert capsys.readouterr().out.strip() == "not_spectral polygon_n_ge_4"
    assert cli.main(["classify", "--body", disc_file]) == 1
    assert capsys.readouterr().out.strip() == "not_spectral not_polygon"


def test_certify_octagon(octagon_file, tmp_path, capsys):
    out = str(tmp_path / "cert.csv")
    rc = cli.main(["certify", "--body", octagon_file, "--out", out])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("fan_pigeonhole")
    assert "recheck pass" in stdout
    lines = open(out).read().splitlines()
    assert lines[0] == "i,j,k,area"
    assert len(lines) == 7


def test_certify_square_is_input_error(square_file, capsys):
    rc = cli.main(["certify", "--body", square_file])
    assert rc == 2


def test_ball_align_disc(disc_file, capsys):
    rc = cli.main(["ball-align", "--body", disc_file, "--A", "1",
                   "--window", "20,40", "--eps", "0.05", "--step", "0.05"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("beta")


def test_ball_align_diamond_reports_no_blowup(tmp_path, diamond_body, capsys):
    path = write_body(tmp_path / "diamond.json", diamond_body)
    rc = cli.main(["ball-align", "--body", path, "--A", "1",
                   "--window", "5,20"])
    assert rc == 1
    assert "property check failed" in capsys.readouterr().err


def test_cap_scan_parabola(tmp_path, parabola_capped, capsys):
    path = write_body(tmp_path / "pcap.json", parabola_capped)
    rc = cli.main(["cap-scan", "--body", path, "--delta", "0.1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "ratio" in out


def test_cap_scan_flat_cap_fails(square_file, capsys):
    rc = cli.main(["cap-scan", "--body", square_file, "--delta", "0.1"])
    assert rc == 1


def test_slab_align_square(square_file, capsys):
    rc = cli.main(["slab-align", "--body", square_file, "--A", "2",
                   "--R-list", "20", "--step", "0.1"])
    assert rc == 0
    assert "max dist" in capsys.readouterr().out


def test_missing_body_file_is_input_error(capsys):
    rc = cli.main(["ft", "--body", "/nonexistent/x.json", "--xi", "0,0"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_nonconvex_body_is_input_error(tmp_path, capsys):
    p = tmp_path / "nc.json"
    p.write_text(json.dumps({"type": "polygon",
                             "vertices": [[0, 0], [2, 0], [1, 0.1],
                                          [2, 2], [0, 2]]}))
    rc = cli.main(["ft", "--body", str(p), "--xi", "1,1"])
    assert rc == 2
