"""Command-line front end.

Subcommands: reproduce, sweep, coeffs, validate, dump-state. Numeric output
uses the shortest round-trip float representation, so identical inputs give
byte-identical files.

Exit codes: 0 ok, 2 a check failed, 64 usage, 65 regime violation,
73 output not writable.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import catalog
from .effective_model import evolve
from .entanglement import closed_form_concurrence, entanglement_entropy, schmidt_concurrence, schmidt_spectrum
from .exceptions import ContractError, RegimeError
from .fockspace import default_cutoff, fidelity_up_to_global_phase, normalize, product_coherent, write_state_csv
from .full_model import Cutoffs, FullModelParams, adiabatic_validation
from .revival import ZERO_CLAMP, RationalTau, coefficients, verify_determining_identity

EX_OK = 0
EX_FAIL = 2
EX_USAGE = 64
EX_DATAERR = 65
EX_CANTCREAT = 73

REPRODUCE_FIDELITY = 1 - 1e-6
COEFF_RESIDUAL = 1e-10


class UsageError(Exception):
    pass


class _CantCreate(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def fmt_float(x: float) -> str:
    return repr(float(x))


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return fmt_float(z.real)
    sign = "+" if z.imag >= 0 or math.isnan(z.imag) else "-"
    return f"{fmt_float(z.real)}{sign}{fmt_float(abs(z.imag))}i"


def parse_complex(text) -> complex:
    """'1.5', '-2i', '0.3+1.2i', '1e-3-4i' (a trailing j is accepted too)."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def parse_grid(text) -> list[complex]:
    """Comma list of complex values, or ``start:stop:count`` (real, inclusive)."""
    if isinstance(text, (list, tuple)):
        vals = [parse_complex(v) for v in text]
    elif ":" in str(text):
        parts = str(text).split(":")
        if len(parts) != 3:
            raise UsageError(f"grid range must be start:stop:count, got {text!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"bad grid range {text!r}") from None
        if count < 1:
            raise UsageError("grid count must be positive")
        vals = [complex(v) for v in np.linspace(lo, hi, count)]
    else:
        vals = [parse_complex(v) for v in str(text).split(",") if v.strip()]
    if not vals:
        raise UsageError("empty grid")
    return vals


# -- configuration ----------------------------------------------------------

DEFAULTS = {
    "alpha": "1",
    "beta": "1",
    "format": "csv",
    "jobs": None,
    "allow_off_resonance": False,
    "samples": 9,
}


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def resolve(args) -> dict:
    """Defaults < config file < command line."""
    cfg = dict(DEFAULTS)
    cfg.update(_load_config(getattr(args, "config", None)))
    for k, v in vars(args).items():
        if k in ("config", "func", "command"):
            continue
        if v is not None and v is not False:
            cfg[k] = v
    if not cfg.get("jobs"):
        cfg["jobs"] = os.cpu_count() or 1
    return cfg


def _open_out(path):
    if not path or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise _CantCreate(f"cannot write {path}: {exc}") from None


def _emit(cfg, text: str):
    fh, close = _open_out(cfg.get("out"))
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _cutoffs(cfg, alpha, beta):
    cut = cfg.get("cutoff")
    if cut is None:
        return default_cutoff(alpha), default_cutoff(beta)
    cut = int(cut)
    if cut < 0:
        raise UsageError("cutoff must be non-negative")
    return cut, cut


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- reproduce --------------------------------------------------------------


def reproduce_record(label, alpha, beta, cutoffs=None) -> dict:
    cut = catalog.cutoffs_for(alpha, beta, cutoffs)
    named = catalog.build(label, alpha, beta, cut)
    state = named.as_normalized()
    sc = catalog.SCENARIOS[label]
    evolved = catalog.dynamical_counterpart(label, alpha, beta, cut)
    fidelity = None if evolved is None else fidelity_up_to_global_phase(state, evolved)
    spectrum = schmidt_spectrum(state)
    if sc.closed_form_concurrence:
        conc, method = closed_form_concurrence(alpha, beta), "closed_form"
    else:
        conc, method = schmidt_concurrence(spectrum), "schmidt"
    return {
        "scenario": label,
        "alpha": alpha,
        "beta": beta,
        "fidelity": fidelity,
        "concurrence": conc,
        "concurrence_method": method,
        "concurrence_schmidt": schmidt_concurrence(spectrum),
        "entropy": entanglement_entropy(state),
        "norm": state.norm(),
    }


def cmd_reproduce(cfg) -> int:
    label = cfg.get("scenario")
    if label not in catalog.SCENARIOS:
        raise UsageError(f"unknown scenario {label!r}; choose from {', '.join(catalog.LABELS)}")
    alpha, beta = parse_complex(cfg["alpha"]), parse_complex(cfg["beta"])
    rec = reproduce_record(label, alpha, beta, _cutoffs(cfg, alpha, beta))
    ok = rec["fidelity"] is None or rec["fidelity"] >= REPRODUCE_FIDELITY
    ok = ok and abs(rec["norm"] - 1.0) <= 1e-10
    if cfg["format"] == "json":
        out = dict(rec, alpha=fmt_complex(alpha), beta=fmt_complex(beta), passed=ok)
        _emit(cfg, _json(out))
    else:
        keys = ["scenario", "alpha", "beta", "fidelity", "concurrence", "concurrence_method",
                "concurrence_schmidt", "entropy", "norm"]
        row = []
        for k in keys:
            v = rec[k]
            if k in ("alpha", "beta"):
                row.append(fmt_complex(v))
            elif v is None:
                row.append("nan")
            elif isinstance(v, str):
                row.append(v)
            else:
                row.append(fmt_float(v))
        _emit(cfg, _csv(keys, [row]))
    return EX_OK if ok else EX_FAIL


# -- sweep ------------------------------------------------------------------


def sweep_point(args) -> tuple[float, float, float]:
    alpha, beta, cut = args
    pc, ac = cut if cut is not None else (default_cutoff(alpha), default_cutoff(beta))
    state = normalize(product_coherent(alpha, beta, pc, ac))
    evolved = evolve(state, math.pi / 2, -1)
    spectrum = schmidt_spectrum(evolved)
    return closed_form_concurrence(alpha, beta), schmidt_concurrence(spectrum), entanglement_entropy(evolved)


def cmd_sweep(cfg) -> int:
    alphas = parse_grid(cfg["alpha"])
    betas = parse_grid(cfg["beta"])
    cut = None
    if cfg.get("cutoff") is not None:
        cut = (int(cfg["cutoff"]), int(cfg["cutoff"]))
    points = [(a, b, cut) for a in alphas for b in betas]
    jobs = int(cfg["jobs"])
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(points))) as pool:
            results = list(pool.map(sweep_point, points))
    else:
        results = [sweep_point(p) for p in points]
    header = ["alpha", "beta", "concurrence_closed", "concurrence_schmidt", "entropy"]
    if cfg["format"] == "json":
        rows = [dict(zip(header, [fmt_complex(a), fmt_complex(b), *r])) for (a, b, _), r in zip(points, results)]
        _emit(cfg, _json(rows))
    else:
        rows = [[fmt_complex(a), fmt_complex(b)] + [fmt_float(x) for x in r] for (a, b, _), r in zip(points, results)]
        _emit(cfg, _csv(header, rows))
    return EX_OK


# -- coeffs -----------------------------------------------------------------


def cmd_coeffs(cfg) -> int:
    try:
        M, N, K = int(cfg["m"]), int(cfg["n"]), int(cfg["k"])
    except (KeyError, TypeError, ValueError):
        raise UsageError("coeffs needs integer --m, --n and --k") from None
    if M <= 0 or N <= 0 or math.gcd(M, N) != 1 or K == 0:
        raise UsageError(f"need gcd(M, N) = 1 with M, N > 0 and K != 0; got M={M}, N={N}, K={K}")
    tau = RationalTau(M, N)
    grid = coefficients(tau, K)
    residual = verify_determining_identity(grid, tau, K)
    c = grid.clamped(ZERO_CLAMP)
    entries = []
    for r in range(1, N + 1):
        for s in range(1, N + 1):
            z = complex(c[r - 1, s - 1])
            entries.append((r, s, z, abs(z), math.atan2(z.imag, z.real) if z != 0 else 0.0))
    if cfg["format"] == "json":
        doc = {
            "M": M, "N": N, "K": K, "residual": residual,
            "coefficients": [
                {"r": r, "s": s, "re": z.real, "im": z.imag, "modulus": mod, "phase": ph}
                for r, s, z, mod, ph in entries
            ],
        }
        _emit(cfg, _json(doc))
    else:
        rows = [[str(r), str(s), fmt_float(z.real), fmt_float(z.imag), fmt_float(mod), fmt_float(ph)]
                for r, s, z, mod, ph in entries]
        _emit(cfg, _csv(["r", "s", "re", "im", "modulus", "phase"], rows) + f"# residual={fmt_float(residual)}\n")
    return EX_OK if residual < COEFF_RESIDUAL else EX_FAIL


# -- validate ---------------------------------------------------------------


def _validation_inputs(cfg):
    if "g1" not in cfg or "g2" not in cfg:
        raise UsageError("validate needs a full-model parameter block (g1, g2, delta, lambda1)")
    block = {k: cfg[k] for k in ("g1", "g2", "delta", "delta1", "delta2", "lambda1", "lambdas", "lambda_cross")
             if k in cfg}
    for k in ("g1", "g2"):
        if isinstance(block[k], str):
            block[k] = parse_complex(block[k])
    if "delta" not in block and not ("delta1" in block and "delta2" in block):
        raise UsageError("validate needs delta (or delta1 and delta2)")
    try:
        p = FullModelParams.from_dict(block)
    except (TypeError, ValueError, ContractError) as exc:
        raise UsageError(f"bad parameter block: {exc}") from None
    alpha, beta = parse_complex(cfg["alpha"]), parse_complex(cfg["beta"])
    c = cfg.get("cutoffs") or {}
    if cfg.get("cutoff") is not None:
        c = dict(c, photon=int(cfg["cutoff"]), b1=int(cfg["cutoff"]))
    cutoffs = Cutoffs(
        int(c.get("photon", default_cutoff(alpha))),
        int(c.get("b1", default_cutoff(beta))),
        int(c.get("b2", 2)),
        int(c.get("b3", 2)),
    )
    lam1 = p.lambda1
    t_max = float(cfg["t_max"]) if cfg.get("t_max") is not None else (2 * math.pi / lam1 if lam1 else 0.0)
    return p, alpha, beta, cutoffs, t_max, int(cfg["samples"])


def cmd_validate(cfg) -> int:
    p, alpha, beta, cutoffs, t_max, samples = _validation_inputs(cfg)
    try:
        rep = adiabatic_validation(alpha, beta, p, t_max, samples, cutoffs,
                                   allow_off_resonance=bool(cfg.get("allow_off_resonance")),
                                   jobs=int(cfg["jobs"]))
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EX_DATAERR
    summary = rep.summary()
    series = [rep.times, rep.fidelity, rep.leak_n2, rep.leak_n3, rep.norm]
    header = ["t", "fidelity", "leak_n2", "leak_n3", "norm"]
    if cfg["format"] == "json":
        doc = {"summary": summary, "series": {h: [float(x) for x in col] for h, col in zip(header, series)}}
        _emit(cfg, _json(doc))
        return EX_OK
    rows = [[fmt_float(x) for x in vals] for vals in zip(*series)]
    _emit(cfg, _csv(header, rows))
    stream = sys.stdout if cfg.get("out") not in (None, "-") else sys.stderr
    stream.write(_json(summary))
    return EX_OK


# -- dump-state -------------------------------------------------------------


def cmd_dump_state(cfg) -> int:
    label = cfg.get("scenario") or "evolved"
    alpha, beta = parse_complex(cfg["alpha"]), parse_complex(cfg["beta"])
    pc, ac = _cutoffs(cfg, alpha, beta)
    if label == "evolved":
        tau = float(cfg.get("tau") or 0.0)
        K = float(cfg.get("k") if cfg.get("k") is not None else -1)
        state = evolve(normalize(product_coherent(alpha, beta, pc, ac)), tau, K)
    elif label in catalog.SCENARIOS:
        state = catalog.build(label, alpha, beta, (pc, ac)).as_normalized()
    else:
        raise UsageError(f"unknown state {label!r}; use 'evolved' or one of {', '.join(catalog.LABELS)}")
    buf = io.StringIO()
    write_state_csv(state, buf)
    _emit(cfg, buf.getvalue())
    return EX_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with any of the flags below (command line wins)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--jobs", type=int, default=None, help="worker count (default: logical CPUs)")
    common.add_argument("--cutoff", type=int, default=None, help="Fock cutoff for both modes")
    common.add_argument("--alpha", default=None, help="photon amplitude, e.g. 1.5 or 1+0.5i")
    common.add_argument("--beta", default=None, help="atom amplitude")

    parser = _Parser(prog="eitangle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reproduce", parents=[common], help="catalog state vs its dynamical origin")
    p.add_argument("--scenario", default=None)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", parents=[common], help="concurrence over alpha x beta grids")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("coeffs", parents=[common], help="revival coefficient table")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("validate", parents=[common], help="full four-mode model vs effective model")
    p.add_argument("--g1", default=None)
    p.add_argument("--g2", default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--delta1", type=float, default=None)
    p.add_argument("--delta2", type=float, default=None)
    p.add_argument("--lambda1", type=float, default=None)
    p.add_argument("--t-max", dest="t_max", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--allow-off-resonance", action="store_true", default=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dump-state", parents=[common], help="write a state as n,m,re,im CSV")
    p.add_argument("--scenario", default=None, help="catalog label or 'evolved'")
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--k", type=float, default=None)
    p.set_defaults(func=cmd_dump_state)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return args.func(cfg)
    except UsageError as exc:
        print(f"eitangle: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EX_USAGE
    except _CantCreate as exc:
        print(f"eitangle: {exc}", file=sys.stderr)
        return EX_CANTCREAT


if __name__ == "__main__":
    sys.exit(main())
