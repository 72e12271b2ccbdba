"""``bjq`` command-line front end.

Settings are resolved in this order, later ones winning:

1. built-in defaults (N = 256, L = 10, hbar = 1, 32 quadrature nodes)
2. the ``BJQ_DEFAULT_HBAR`` environment variable
3. a ``--config`` file of ``key = value`` lines (``#`` starts a comment)
4. command-line flags

Exit status is 0 on success, 2 for invalid input and 1 when a computation
fails numerically (including signals that reach the grid boundary).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io
from .algebra import (
    QuantScheme,
    commutator,
    crehan_operator_spectrum,
    crehan_spectrum,
    format_oppoly,
    printed_mixed_commutator,
    quantize_monomial,
)
from .distributions import (
    GHOST_P0,
    GHOST_REGION,
    InterferenceRegion,
    QuadratureRule,
    ambiguity,
    bjw_filtered,
    bjw_quadrature,
    cross_wigner_tau,
    interference_energy,
    rihaczek,
    wigner,
)
from .errors import BoundaryMassWarning, GridMismatchError, NumericalError
from .grid import PhaseFunction, PhaseGrid, SampledSignal, make_phase_grid, sample_function
from .metaplectic import MetaGenerator, covariance_defect, project, theta_invariance
from .pseudodiff import apply, pairing_check, quantize
from .signals import SignalSpec, generate_signal
from .symbols import parse_symbol
from .uncertainty import (
    MixedState,
    covariance_matrix,
    momentum_operator,
    position_operator,
    rs_check,
    rs_matrix_check,
)

ENV_HBAR = "BJQ_DEFAULT_HBAR"
FORMATS = ("csv", "json", "pgm")


@dataclass(frozen=True)
class RunConfig:
    n_points: int = 256
    half_length: float = 10.0
    hbar: float = 1.0
    tau: float = 0.5
    scheme: str = "weyl"
    quad_nodes: int = 32
    output_format: str | None = None
    output_path: str | None = None
    tolerance: float | None = None
    x_min: float = GHOST_REGION.x_range[0]
    x_max: float = GHOST_REGION.x_range[1]
    p_min: float = GHOST_REGION.p_range[0]
    p_max: float = GHOST_REGION.p_range[1]

    def __post_init__(self):
        if self.n_points < 4 or self.n_points % 2:
            raise ValueError(f"n_points must be an even integer >= 4, got {self.n_points}")
        if not self.half_length > 0:
            raise ValueError("half_length must be positive")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if self.quad_nodes < 1:
            raise ValueError("quad_nodes must be at least 1")
        if self.output_format is not None and self.output_format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        QuantScheme.parse(self.scheme)

    @property
    def phase_grid(self) -> PhaseGrid:
        return make_phase_grid(self.n_points, self.half_length, self.hbar)

    @property
    def rule(self) -> QuadratureRule:
        return QuadratureRule.gauss_legendre(self.quad_nodes)

    @property
    def region(self) -> InterferenceRegion:
        return InterferenceRegion((self.x_min, self.x_max), (self.p_min, self.p_max))

    @property
    def fmt(self) -> str:
        if self.output_format:
            return self.output_format
        suffix = Path(self.output_path or "").suffix.lstrip(".").lower()
        return suffix if suffix in FORMATS else "csv"


_ALIASES = {"format": "output_format", "out": "output_path"}


def _coerce(key: str, raw):
    kinds = {f.name: f.type for f in fields(RunConfig)}
    if key not in kinds:
        raise ValueError(f"unknown setting {key!r}")
    if raw is None:
        return None
    t = kinds[key]
    if t == "int":
        v = float(raw)
        if v != int(v):
            raise ValueError(f"{key} must be an integer, got {raw!r}")
        return int(v)
    if t in ("float", "float | None"):
        return float(raw)
    return str(raw).strip()


def read_config(path) -> dict:
    """Parse a ``key = value`` file; keys are RunConfig field names."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        key = _ALIASES.get(key, key)
        out[key] = _coerce(key, value.strip())
    return out


def resolve_config(flags: dict, env=None) -> RunConfig:
    env = os.environ if env is None else env
    settings = {}
    if env.get(ENV_HBAR):
        settings["hbar"] = _coerce("hbar", env[ENV_HBAR])
    if flags.get("config"):
        settings.update(read_config(flags["config"]))
    for key, value in flags.items():
        if key in {f.name for f in fields(RunConfig)}:
            settings[key] = value
    return replace(RunConfig(), **settings)


# -- argument parsing ----------------------------------------------------------------


def _global_flags() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g.add_argument("--n-points", dest="n_points", type=int)
    g.add_argument("--half-length", dest="half_length", type=float)
    g.add_argument("--hbar", type=float)
    g.add_argument("--quad-nodes", dest="quad_nodes", type=int)
    g.add_argument("--out", dest="output_path")
    g.add_argument("--format", dest="output_format", choices=FORMATS)
    g.add_argument("--tolerance", type=float)
    g.add_argument("--config")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="bjq", description="Phase-space quantization toolkit.", parents=[common]
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common], argument_default=argparse.SUPPRESS)

    def signals(p, second=True):
        p.add_argument("--signal", default="gaussian:0,0,1", help="signal spec, e.g. hermite:1")
        if second:
            p.add_argument("--signal2", default=None, help="second signal for cross distributions")

    signals(add("wigner", "Wigner distribution"))
    p = add("tau-wigner", "tau-Wigner distribution")
    signals(p)
    p.add_argument("--tau", type=float)
    p = add("bjw", "Born-Jordan-Wigner distribution")
    signals(p)
    p.add_argument("--method", choices=("filter", "quadrature"), default="filter")
    signals(add("rihaczek", "Rihaczek distribution"))
    signals(add("ambiguity", "ambiguity function"))

    p = add("quantize", "quantize the monomial x^M p^N")
    p.add_argument("--scheme")
    p.add_argument("--monomial", required=True, help="M,N")
    p = add("commutator", "[Op(x^M), Op(p^N)] in normal order")
    p.add_argument("--m", dest="exp_m", type=int, required=True)
    p.add_argument("--n", dest="exp_n", type=int, required=True)
    p.add_argument("--scheme")
    p = add("crehan", "energy levels of the sextic oscillator")
    p.add_argument("--N", dest="level", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--alpha", required=True)

    p = add("apply-op", "apply Op(a) to a signal")
    p.add_argument("--symbol", required=True)
    p.add_argument("--scheme")
    p.add_argument("--tau", type=float)
    signals(p, second=False)
    p = add("pairing-check", "compare (Op(a) psi, phi) with the distribution pairing")
    p.add_argument("--symbol", default="gauss")
    p.add_argument("--scheme")
    signals(p)
    p = add("covariance-test", "metaplectic covariance defect")
    p.add_argument("--scheme")
    p.add_argument("--generator", required=True)
    p.add_argument("--symbol", default="witness")
    p = add("uncertainty", "Robertson-Schrodinger report for (X, P)")
    p.add_argument("--state", default="hermite:0", help="signal spec or w@spec;w@spec;...")
    p = add("ghost", "interference energy of Wigner vs Born-Jordan-Wigner")
    p.add_argument("--signal", default=f"two_tone:{GHOST_P0:g},1")
    for name in ("x_min", "x_max", "p_min", "p_max"):
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float)
    return parser


# -- helpers -------------------------------------------------------------------------


def _signal(spec: str, cfg: RunConfig) -> SampledSignal:
    pg = cfg.phase_grid
    return generate_signal(SignalSpec.parse(spec), pg.x_grid, pg.hbar)


def _pair(args, cfg):
    psi = _signal(args.signal, cfg)
    phi = _signal(args.signal2, cfg) if getattr(args, "signal2", None) else psi
    return psi, phi


def _scheme_arg(cfg: RunConfig):
    """Library form of the configured scheme: ``"weyl"``, ``"bj"`` or a float tau."""
    q = QuantScheme.parse(cfg.scheme)
    return float(q.value) if q.tag == "tau" else q.tag


def _emit_phase(f: PhaseFunction, cfg: RunConfig, name: str, out) -> None:
    if cfg.output_path is None:
        v = f.values
        pg = f.pgrid
        summary = {
            "distribution": name,
            "n_points": pg.n,
            "integral": complex(v.sum() * pg.dx * pg.dp),
            "max_abs_real": float(np.abs(v.real).max()),
            "max_abs_imag": float(np.abs(v.imag).max()),
            "min_real": float(v.real.min()),
        }
        print(json.dumps(io.to_jsonable(summary), indent=2, sort_keys=True), file=out)
        return
    fmt = cfg.fmt
    if fmt == "csv":
        io.write_csv(f, cfg.output_path)
    elif fmt == "pgm":
        io.write_pgm(f, cfg.output_path)
    else:
        pg = f.pgrid
        io.write_json(
            {"distribution": name, "x": pg.x, "p": pg.p, "re": f.values.real, "im": f.values.imag},
            cfg.output_path,
        )


def _emit_report(report, cfg: RunConfig, out, text: str | None = None) -> None:
    if cfg.output_path is not None:
        if cfg.fmt != "json":
            raise ValueError("this command writes JSON reports only; use --format json")
        io.write_json(report, cfg.output_path)
    if text is not None:
        print(text, file=out)
    elif cfg.output_path is None:
        print(json.dumps(io.to_jsonable(report), indent=2, sort_keys=True), file=out)


def _pair_ints(text: str) -> tuple[int, int]:
    try:
        m, n = (int(v) for v in text.split(","))
    except ValueError:
        raise ValueError(f"expected M,N with non-negative integers, got {text!r}") from None
    if m < 0 or n < 0:
        raise ValueError("exponents must be non-negative")
    return m, n


def _exact(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return float(text)


def parse_state(text: str, cfg: RunConfig) -> MixedState:
    """``hermite:1`` for a pure state, ``0.5@hermite:0;0.5@hermite:1`` for a mixture."""
    parts = [t.strip() for t in text.split(";") if t.strip()]
    if not parts:
        raise ValueError("empty state spec")
    if len(parts) == 1 and "@" not in parts[0]:
        return MixedState.pure(_signal(parts[0], cfg))
    weights, states = [], []
    for part in parts:
        w, sep, spec = part.partition("@")
        if not sep:
            raise ValueError(f"mixture component {part!r} needs the form weight@spec")
        weights.append(float(w))
        states.append(_signal(spec, cfg))
    return MixedState(weights, states)


# -- subcommands ---------------------------------------------------------------------


def _cmd_distribution(args, cfg, out):
    pg = cfg.phase_grid
    psi, phi = _pair(args, cfg)
    cmd = args.command
    if cmd == "wigner":
        f = cross_wigner_tau(psi, phi, 0.5, pg)
    elif cmd == "tau-wigner":
        f = cross_wigner_tau(psi, phi, cfg.tau, pg)
    elif cmd == "bjw":
        f = bjw_filtered(psi, phi, pg) if args.method == "filter" else bjw_quadrature(psi, phi, pg, cfg.rule)
    elif cmd == "rihaczek":
        f = rihaczek(psi, phi, pg)
    else:
        f = ambiguity(psi, phi, pg)
    _emit_phase(f, cfg, cmd, out)


def _cmd_quantize(args, cfg, out):
    m, n = _pair_ints(args.monomial)
    scheme = QuantScheme.parse(cfg.scheme)
    op = quantize_monomial(m, n, scheme)
    text = format_oppoly(op)
    _emit_report({"scheme": str(scheme), "monomial": [m, n], "operator": text}, cfg, out, text)


def _cmd_commutator(args, cfg, out):
    m, n = args.exp_m, args.exp_n
    if m < 0 or n < 0:
        raise ValueError("exponents must be non-negative")
    scheme = QuantScheme.parse(cfg.scheme)
    c = commutator(quantize_monomial(m, 0, scheme), quantize_monomial(0, n, scheme))
    text = format_oppoly(c)
    report = {
        "scheme": str(scheme),
        "m": m,
        "n": n,
        "commutator": text,
        "without_factorial_weights": format_oppoly(printed_mixed_commutator(m, n)),
    }
    _emit_report(report, cfg, out, text)


def _cmd_crehan(args, cfg, out):
    if args.level < 0:
        raise ValueError("--N must be non-negative")
    lam, alpha = _exact(args.lam), _exact(args.alpha)
    hbar = cfg.hbar
    if isinstance(lam, Fraction) and isinstance(alpha, Fraction):
        hbar = Fraction(repr(hbar))
    e = crehan_spectrum(args.level, lam, alpha, hbar)
    e_op = crehan_operator_spectrum(args.level, lam, alpha, hbar)
    report = {"N": args.level, "lambda": lam, "alpha": alpha, "hbar": hbar, "energy": e,
              "operator_energy": e_op}
    _emit_report(report, cfg, out, str(e))


def _cmd_apply(args, cfg, out):
    pg = cfg.phase_grid
    a = parse_symbol(args.symbol, pg.hbar)
    psi = _signal(args.signal, cfg)
    res = apply(quantize(a, _scheme_arg(cfg), pg, cfg.rule), psi)
    if cfg.output_path is None:
        print(json.dumps(io.to_jsonable({"norm": res.norm(), "overlap": complex(np.vdot(psi.values, res.values) * pg.dx)}),
                         indent=2, sort_keys=True), file=out)
    elif cfg.fmt == "csv":
        io.write_csv(res, cfg.output_path)
    else:
        io.write_json({"x": pg.x, "re": res.values.real, "im": res.values.imag}, cfg.output_path)


def _cmd_pairing(args, cfg, out):
    pg = cfg.phase_grid
    a = sample_function(pg, parse_symbol(args.symbol, pg.hbar))
    psi, phi = _pair(args, cfg)
    lhs, rhs = pairing_check(a, psi, phi, _scheme_arg(cfg), pg, cfg.rule)
    tol = cfg.tolerance or 1e-6
    err = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    report = {"scheme": cfg.scheme, "symbol": args.symbol, "lhs": lhs, "rhs": rhs,
              "relative_error": err, "tolerance": tol, "passed": bool(err <= tol)}
    _emit_report(report, cfg, out)
    return 0 if err <= tol else 1


def _cmd_covariance(args, cfg, out):
    pg = cfg.phase_grid
    g = MetaGenerator.parse(args.generator)
    # sampled symbols take the fast periodic kernel path
    a = sample_function(pg, parse_symbol(args.symbol, pg.hbar))
    d = covariance_defect(_scheme_arg(cfg), a, g, pg, cfg.rule)
    tol = cfg.tolerance or 1e-5
    report = {
        "rows": [{"scheme": cfg.scheme, "generator": str(g), "symbol_id": args.symbol, "defect": d}],
        "theta_invariance": theta_invariance(project(g), pg),
        "tolerance": tol,
        "covariant": bool(d <= tol),
    }
    _emit_report(report, cfg, out)


def _cmd_uncertainty(args, cfg, out):
    pg = cfg.phase_grid
    state = parse_state(args.state, cfg)
    tol = cfg.tolerance or 1e-8
    rep = rs_check(state, position_operator(pg), momentum_operator(pg), tol)
    sigma = covariance_matrix(state, pg)
    lam, ok = rs_matrix_check(sigma, pg.hbar)
    report = {"report": rep, "covariance_matrix": sigma, "min_eigenvalue": lam, "matrix_check": ok}
    _emit_report(report, cfg, out)


def _cmd_ghost(args, cfg, out):
    pg = cfg.phase_grid
    psi = _signal(args.signal, cfg)
    region = cfg.region
    ew = interference_energy(wigner(psi, pg), region)
    eb = interference_energy(bjw_filtered(psi, psi, pg), region)
    report = {
        "signal": args.signal,
        "region": {"x_range": list(region.x_range), "p_range": list(region.p_range)},
        "wigner_energy": ew,
        "bjw_energy": eb,
        "ratio": eb / ew if ew > 0 else 0.0,
    }
    _emit_report(report, cfg, out)


COMMANDS = {
    "wigner": _cmd_distribution,
    "tau-wigner": _cmd_distribution,
    "bjw": _cmd_distribution,
    "rihaczek": _cmd_distribution,
    "ambiguity": _cmd_distribution,
    "quantize": _cmd_quantize,
    "commutator": _cmd_commutator,
    "crehan": _cmd_crehan,
    "apply-op": _cmd_apply,
    "pairing-check": _cmd_pairing,
    "covariance-test": _cmd_covariance,
    "uncertainty": _cmd_uncertainty,
    "ghost": _cmd_ghost,
}


def run(argv=None, out=None, err=None, env=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        cfg = resolve_config(vars(args), env)
        with warnings.catch_warnings():
            warnings.simplefilter("error", BoundaryMassWarning)
            code = COMMANDS[args.command](args, cfg, out)
    except (NumericalError, BoundaryMassWarning) as exc:
        print(f"bjq: numerical failure: {exc}", file=err)
        return 1
    except (ValueError, GridMismatchError, FileNotFoundError, ZeroDivisionError) as exc:
        print(f"bjq: {exc}", file=err)
        return 2
    return code or 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
