import json

import jsonschema
import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from bjquant import io
from bjquant.distributions import GHOST_REGION, bjw_filtered, interference_energy, wigner
from bjquant.grid import PhaseFunction, SampledSignal, make_phase_grid
from bjquant.metaplectic import J, covariance_defect, project, theta_invariance
from bjquant.pseudodiff import kernel_weyl
from bjquant.uncertainty import MixedState, momentum_operator, position_operator, rs_check

from conftest import band_limited, sig


@pytest.fixture
def pg64_state(pg64):
    rng = np.random.default_rng(0)
    return PhaseFunction(pg64, rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64)))


def test_phase_csv_round_trip(tmp_path, pg64, pg64_state):
    path = tmp_path / "f.csv"
    io.write_csv(pg64_state, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,p,re,im" and len(lines) == 64 * 64 + 1
    # x is the outer index
    first, second = (list(map(float, line.split(","))) for line in lines[1:3])
    assert first[0] == second[0] and first[1] < second[1]
    back = io.read_phase_csv(path, pg64)
    assert np.array_equal(back.values, pg64_state.values)


def test_signal_csv_round_trip(tmp_path, pg):
    psi = band_limited(pg, 3)
    io.write_csv(psi, tmp_path / "s.csv")
    assert np.array_equal(io.read_signal_csv(tmp_path / "s.csv", pg.x_grid).values, psi.values)


def test_matrix_csv_round_trip(tmp_path, pg64):
    A = kernel_weyl(lambda x, p: np.exp(-(x**2 + p**2) / 2) * (1 + 1j * x), pg64)
    io.write_csv(A, tmp_path / "m.csv")
    assert np.array_equal(io.read_matrix_csv(tmp_path / "m.csv", pg64).entries, A.entries)


def test_plain_arrays(tmp_path):
    x = np.linspace(0, 1, 5)
    io.write_csv(x**2 + 0j, tmp_path / "a.csv", coords=x)
    assert (tmp_path / "a.csv").read_text().splitlines()[0] == "x,re,im"
    io.write_csv(np.eye(2), tmp_path / "b.csv", coords=([0.0, 1.0], [0.0, 1.0]))
    assert len((tmp_path / "b.csv").read_text().splitlines()) == 5
    with pytest.raises(ValueError):
        io.write_csv(x, tmp_path / "c.csv")
    with pytest.raises(ValueError):
        io.write_csv(np.zeros((2, 2, 2)), tmp_path / "c.csv", coords=(x, x))


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_format_is_lossless(v):
    assert float(io.FLOAT_FORMAT.format(v)) == v


def test_csv_readers_validate(tmp_path, pg64, pg):
    path = tmp_path / "f.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        io.read_phase_csv(path, pg64)
    io.write_csv(PhaseFunction(pg64, np.zeros((64, 64))), path)
    with pytest.raises(ValueError):
        io.read_phase_csv(path, make_phase_grid(64, 7.0, 1.0))
    with pytest.raises(ValueError):
        io.read_phase_csv(path, pg)
    io.write_csv(sig(pg, "hermite:0"), path)
    with pytest.raises(ValueError):
        io.read_signal_csv(path, pg64.x_grid)


# -- PGM ----------------------------------------------------------------------------------------


def test_pgm_gaussian_peak(tmp_path, pg, signals):
    W = wigner(signals["gaussian"], pg)
    side = io.write_pgm(W, tmp_path / "w.pgm")
    pix = io.read_pgm(tmp_path / "w.pgm")
    assert pix.shape == (256, 256) and pix.dtype == np.dtype(">u2")
    r, c = np.unravel_index(np.argmax(pix), pix.shape)
    # rows run from high p to low p, so p = 0 (index 128) sits in row 127
    assert (r, c) == (127, 128)
    assert pix.max() == io.PGM_MAXVAL
    assert side.name == "w.pgm.json"


def test_pgm_header_bytes(tmp_path, pg64, pg64_state):
    io.write_pgm(pg64_state, tmp_path / "f.pgm")
    data = (tmp_path / "f.pgm").read_bytes()
    header = b"P5\n64 64\n65535\n"
    assert data.startswith(header) and len(data) == len(header) + 2 * 64 * 64


def test_pgm_sidecar_inverts(tmp_path, pg, signals):
    W = wigner(signals["h1"], pg)
    side = io.write_pgm(W, tmp_path / "h.pgm")
    meta = json.loads(side.read_text())
    pix = io.read_pgm(tmp_path / "h.pgm").astype(float)
    values = meta["min"] + pix * (meta["max"] - meta["min"]) / meta["maxval"]
    ref = W.values.real.T[::-1]
    step = (meta["max"] - meta["min"]) / meta["maxval"]
    assert np.max(np.abs(values - ref)) <= 0.5 * step * (1 + 1e-9)
    x = meta["x_min"] + meta["dx"] * np.arange(meta["n_points"])
    assert np.array_equal(x, pg.x)
    assert meta["p_min"] == pg.p[0] and meta["hbar"] == 1.0


def test_pgm_constant_image(tmp_path, pg64):
    io.write_pgm(PhaseFunction(pg64, np.ones((64, 64))), tmp_path / "c.pgm")
    assert not io.read_pgm(tmp_path / "c.pgm").any()


def test_read_pgm_rejects_other_formats(tmp_path):
    (tmp_path / "x.pgm").write_bytes(b"P2\n1 1\n255\n0\n")
    with pytest.raises(ValueError):
        io.read_pgm(tmp_path / "x.pgm")


# -- JSON -----------------------------------------------------------------------------------------


def test_jsonable_conversions():
    out = io.to_jsonable({"a": np.float64(1.5), "b": 2 + 3j, "c": np.arange(3), "d": Fraction(-5, 2), "e": np.bool_(True)})
    assert out == {"a": 1.5, "b": {"re": 2.0, "im": 3.0}, "c": [0, 1, 2], "d": "-5/2", "e": True}
    with pytest.raises(ValueError):
        io.to_jsonable({"bad": float("nan")})


def test_covariance_report_schema(tmp_path, pg):
    state = MixedState.pure(sig(pg, "hermite:1"))
    report = rs_check(state, position_operator(pg), momentum_operator(pg))
    io.write_json(report, tmp_path / "r.json")
    data = json.loads((tmp_path / "r.json").read_text())
    jsonschema.validate(data, io.COVARIANCE_REPORT_SCHEMA)
    assert data["lhs"] == report.lhs


def test_defect_schema(tmp_path, pg, sampled_symbols):
    d = covariance_defect("weyl", sampled_symbols["gauss"], J(), pg)
    report = {
        "rows": [{"scheme": "weyl", "generator": "J", "symbol_id": "gauss", "defect": d}],
        "theta_invariance": theta_invariance(project(J()), pg),
    }
    io.write_json(report, tmp_path / "d.json")
    jsonschema.validate(json.loads((tmp_path / "d.json").read_text()), io.DEFECT_SCHEMA)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"rows": [{"scheme": "weyl"}]}, io.DEFECT_SCHEMA)


def test_ghost_schema(tmp_path, pg, signals):
    psi = signals["two_tone"]
    ew = interference_energy(wigner(psi, pg), GHOST_REGION)
    eb = interference_energy(bjw_filtered(psi, psi, pg), GHOST_REGION)
    report = {
        "signal": "two_tone:3,1",
        "region": {"x_range": list(GHOST_REGION.x_range), "p_range": list(GHOST_REGION.p_range)},
        "wigner_energy": ew,
        "bjw_energy": eb,
        "ratio": eb / ew,
    }
    io.write_json(report, tmp_path / "g.json")
    text = (tmp_path / "g.json").read_text()
    jsonschema.validate(json.loads(text), io.GHOST_SCHEMA)
    # lossless float printing
    assert json.loads(text)["wigner_energy"] == ew


def test_json_is_deterministic(tmp_path):
    report = {"b": 1.0, "a": [1 + 1j]}
    io.write_json(report, tmp_path / "1.json")
    io.write_json(dict(reversed(list(report.items()))), tmp_path / "2.json")
    assert (tmp_path / "1.json").read_bytes() == (tmp_path / "2.json").read_bytes()


def test_signal_written_by_plain_array_matches_signal_writer(tmp_path, pg):
    psi = sig(pg, "chirp:0.5")
    io.write_csv(psi, tmp_path / "a.csv")
    io.write_csv(psi.values, tmp_path / "b.csv", coords=pg.x)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert isinstance(io.read_signal_csv(tmp_path / "b.csv", pg.x_grid), SampledSignal)
