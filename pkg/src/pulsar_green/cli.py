"""Command-line front end: ``pulsar-green <command> [--config FILE] [--key value ...]``.

Configuration is a flat ``key = value`` file; every key can be overridden
on the command line.  Grids are a single number, a comma-separated list or
``start:stop:count:log|lin``.  Output is CSV with 17 significant digits and
LF line endings.  Exit codes: 0 success, 1 usage or config error,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .column import ColumnParams, derive, eigenmode
from .errors import (
    GridTooCoarseError,
    NonConvergenceError,
    PoleError,
    StencilError,
    UnsupportedParameterError,
)
from .greens.convolve import GRID_TOL, TabulatedSource, convolve_source
from .greens.density import (
    density_jump,
    kg_closed,
    kg_quadrature,
    number_density_closed,
    number_density_quadrature,
    number_density_series,
)
from .greens.eigen import orthogonality_integral, orthogonality_norm
from .greens.residual import energy_residual, spatial_residual, transport_residual
from .greens.series import spectrum
from .identities import check_identity, check_spatial_wronskian, check_whittaker_wronskian
from .specfun.control import GREENS_CONTROL, IDENTITY_CONTROL, SeriesControl

COMMANDS = ("spectrum", "density", "identity", "validate", "convolve")
NUMERICAL_ERRORS = (NonConvergenceError, GridTooCoarseError, UnsupportedParameterError,
                    PoleError, StencilError, FloatingPointError, OverflowError)

# Key -> (parser, default).  Grid keys hold their text form.
_KEYS: dict[str, tuple[Callable[[str], object], object]] = {
    "ndot0": (float, 1.0),
    "t_e": (float, 1e7),
    "r0": (float, 1e4),
    "alpha": (float, 0.1),
    "xi": (float, 1.5),
    "beta": (float, 0.3),
    "tau0": (float, 0.5),
    "chi0": (float, 0.1),
    "taus": (str, "0.01,1.0,1.5"),
    "chis": (str, "0.01:30:40:log"),
    "max_terms": (int, None),
    "rel_tol": (float, None),
    "consecutive_small": (int, None),
    "quad_rel_tol": (float, 1e-8),
    "x0s": (str, "0,0.3,1"),
    "xs": (str, "1,1.2"),
    "as": (str, "0.125"),
    "accelerate": (str, "true"),
    "tolerance": (float, 1e-5),
    "sigma_ratio": (float, 1.0),
    "grid_tol": (float, GRID_TOL),
    "output": (str, None),
    "source": (str, None),
}


class ConfigError(ValueError):
    """Invalid command line or configuration file."""


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI run needs."""

    command: str
    params: ColumnParams
    injection: tuple[float, float]
    taus: tuple[float, ...]
    chis: tuple[float, ...]
    control: SeriesControl
    output_path: str | None
    source_path: str | None = None
    extra: dict = field(default_factory=dict)


def parse_grid(text: str) -> tuple[float, ...]:
    """``1.5``, ``0.1,0.2`` or ``start:stop:count:log|lin`` to a strictly increasing tuple."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 4:
                raise ConfigError(f"grid {text!r} must be start:stop:count:log|lin")
            start, stop, count, kind = float(parts[0]), float(parts[1]), int(parts[2]), parts[3]
            if count < 1:
                raise ConfigError(f"grid {text!r} needs count >= 1")
            if kind == "log":
                if start <= 0 or stop <= 0:
                    raise ConfigError(f"log grid {text!r} needs positive ends")
                vals = np.geomspace(start, stop, count)
            elif kind == "lin":
                vals = np.linspace(start, stop, count)
            else:
                raise ConfigError(f"grid spacing must be log or lin, got {kind!r}")
        else:
            vals = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse grid {text!r}") from exc
    if vals.size == 0:
        raise ConfigError("grid is empty")
    if vals.size > 1 and np.any(np.diff(vals) <= 0):
        raise ConfigError(f"grid {text!r} is not strictly increasing")
    return tuple(float(v) for v in vals)


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"{path}:{no}: unknown key {key!r}")
        out[key] = value
    return out


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def build_config(command: str, raw: dict[str, str]) -> RunConfig:
    """Typed, validated configuration from merged raw strings."""
    vals: dict[str, object] = {}
    for key, (conv, default) in _KEYS.items():
        if key in raw and raw[key] is not None:
            try:
                vals[key] = conv(raw[key])
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw[key]!r}") from exc
        else:
            vals[key] = default
    base = IDENTITY_CONTROL if command == "identity" else GREENS_CONTROL
    try:
        control = SeriesControl(
            vals["max_terms"] if vals["max_terms"] is not None else base.max_terms,
            vals["rel_tol"] if vals["rel_tol"] is not None else base.rel_tol,
            vals["consecutive_small"] if vals["consecutive_small"] is not None
            else base.consecutive_small,
        )
        params = ColumnParams(vals["ndot0"], vals["t_e"], vals["r0"], vals["alpha"], vals["xi"],
                              vals["beta"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    taus = parse_grid(vals["taus"])
    chis = parse_grid(vals["chis"])
    if min(taus) < 0 or min(chis) <= 0:
        raise ConfigError("taus must be >= 0 and chis > 0")
    if vals["tau0"] < 0 or vals["chi0"] <= 0:
        raise ConfigError("tau0 must be >= 0 and chi0 > 0")
    for key in ("quad_rel_tol", "tolerance", "grid_tol", "sigma_ratio"):
        if not vals[key] > 0:
            raise ConfigError(f"{key} must be positive")
    if command in ("spectrum", "density", "identity", "convolve") and not vals["output"]:
        raise ConfigError(f"{command} needs --output")
    if command == "convolve" and not vals["source"]:
        raise ConfigError("convolve needs --source")
    extra = {
        "quad_rel_tol": vals["quad_rel_tol"],
        "x0s": parse_grid(vals["x0s"]) if command == "identity" else (),
        "xs": parse_grid(vals["xs"]) if command == "identity" else (),
        "as": parse_grid(vals["as"]) if command == "identity" else (),
        "accelerate": _bool(vals["accelerate"]),
        "tolerance": vals["tolerance"],
        "sigma_ratio": vals["sigma_ratio"],
        "grid_tol": vals["grid_tol"],
    }
    return RunConfig(command, params, (vals["tau0"], vals["chi0"]), taus, chis, control,
                     vals["output"], vals["source"], extra)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    """Write atomically: nothing is left at ``path`` unless every row was produced."""
    text = ",".join(header) + "\n" + "".join(",".join(_fmt(v) for v in r) + "\n" for r in rows)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".pulsar-green-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_spectrum(cfg: RunConfig) -> int:
    """CSV ``chi,tau,chi2_fg,terms_used,est_rel_err``; chi2_fg = (kT)^3 chi^2 f_G."""
    tau0, chi0 = cfg.injection
    kt3 = cfg.params.kt**3
    rows = []
    for tau in cfg.taus:
        # One sweep per tau keeps per-row terms_used and error estimates.
        for chi in cfg.chis:
            grid = spectrum(cfg.params, tau0, chi0, [tau], [chi], cfg.control)
            if grid.est_rel_err > cfg.control.rel_tol:
                raise NonConvergenceError(
                    f"est_rel_err {grid.est_rel_err:.2e} above rel_tol at tau={tau}, chi={chi}")
            rows.append((chi, tau, kt3 * chi * chi * grid.values[0, 0], grid.terms_used,
                         grid.est_rel_err))
    write_csv(cfg.output_path, ("chi", "tau", "chi2_fg", "terms_used", "est_rel_err"), rows)
    return 0


def run_density(cfg: RunConfig) -> int:
    """CSV ``tau,n_series,n_closed,n_quadrature,rel_spread``."""
    tau0, chi0 = cfg.injection
    c = cfg.control
    quad = SeriesControl(c.max_terms, cfg.extra["quad_rel_tol"], c.consecutive_small)
    rows = []
    for tau in cfg.taus:
        ns = number_density_series(cfg.params, tau0, tau)
        nc = number_density_closed(cfg.params, tau0, tau)
        nq = number_density_quadrature(cfg.params, tau0, chi0, tau, quad)
        spread = max(abs(u - v) / max(abs(u), abs(v), 1e-300)
                     for u, v in ((ns, nc), (ns, nq), (nc, nq)))
        rows.append((tau, ns, nc, nq, spread))
    write_csv(cfg.output_path, ("tau", "n_series", "n_closed", "n_quadrature", "rel_spread"), rows)
    return 0


def run_identity(cfg: RunConfig) -> int:
    """CSV of identity reports over the (x0, x, a) grid; exit 2 beyond ``tolerance``."""
    rows = []
    worst = 0.0
    for x0 in cfg.extra["x0s"]:
        for x in cfg.extra["xs"]:
            for a in cfg.extra["as"]:
                rep = check_identity(x0, x, a, cfg.control, accelerate=cfg.extra["accelerate"])
                worst = max(worst, rep.rel_diff)
                rows.append((x0, x, a, rep.lhs, rep.rhs, rep.rel_diff, rep.terms_used,
                             rep.accelerated))
    write_csv(cfg.output_path, ("x0", "x", "a", "lhs", "rhs", "rel_diff", "terms_used",
                                "accelerated"), rows)
    if worst > cfg.extra["tolerance"]:
        print(f"identity rel_diff {worst:.3e} exceeds tolerance {cfg.extra['tolerance']:.1e}",
              file=sys.stderr)
        return 2
    return 0


def read_source(path: str) -> TabulatedSource:
    """Parse a ``tau0,chi0,q`` CSV covering a full rectangular grid."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise ConfigError(f"cannot read source {path!r}: {exc}") from exc
    if not lines or [h.strip() for h in lines[0].split(",")] != ["tau0", "chi0", "q"]:
        raise ConfigError("source file must start with the header tau0,chi0,q")
    entries: dict[tuple[float, float], float] = {}
    for no, line in enumerate(lines[1:], 2):
        parts = line.split(",")
        try:
            t, c, q = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"{path}:{no}: expected three numbers") from exc
        if (t, c) in entries:
            raise ConfigError(f"{path}:{no}: duplicate grid node")
        entries[(t, c)] = q
    if not entries:
        raise ConfigError("source file has no rows")
    taus = sorted({k[0] for k in entries})
    chis = sorted({k[1] for k in entries})
    if len(entries) != len(taus) * len(chis):
        raise ConfigError("source nodes do not form a rectangular grid")
    q = np.array([[entries[(t, c)] for c in chis] for t in taus])
    try:
        return TabulatedSource(tuple(taus), tuple(chis), q)
    except ValueError as exc:
        raise ConfigError(f"invalid source: {exc}") from exc


def run_convolve(cfg: RunConfig) -> int:
    """CSV ``tau,chi,f`` for the tabulated source."""
    src = read_source(cfg.source_path)
    rows = []
    for tau in cfg.taus:
        for chi in cfg.chis:
            f = convolve_source(cfg.params, src, tau, chi, cfg.control,
                                sigma_ratio=cfg.extra["sigma_ratio"], tolerance=cfg.extra["grid_tol"])
            rows.append((tau, chi, f))
    write_csv(cfg.output_path, ("tau", "chi", "f"), rows)
    return 0


def validation_checks(cfg: RunConfig) -> list[tuple[str, float, float]]:
    """``(name, measured, target)`` for every invariant; pass means measured < target."""
    p, c = cfg.params, cfg.control
    d = derive(p)
    tau0, chi0 = cfg.injection
    out: list[tuple[str, float, float]] = []

    worst = 0.0
    for n in range(5):
        diag = orthogonality_norm(n, p.alpha, d.w)
        for m in range(5):
            v = orthogonality_integral(n, m, p.alpha, d.w, c)
            worst = max(worst, abs(v - diag) / diag if n == m else abs(v) / diag)
    out.append(("orthogonality n,m<=4", worst, 1e-8))

    mode0 = eigenmode(0, d, p.beta)
    rep = check_whittaker_wronskian(d.kappa, mode0.mu, [0.1, 0.5, 2.0, 10.0])
    out.append(("whittaker wronskian", rep.rel_diff, 1e-8))
    rep = check_spatial_wronskian(0.3, p.alpha, d.w, 1.0)
    out.append(("spatial wronskian rho=0.3", rep.rel_diff, 1e-8))
    worst = max(check_spatial_wronskian(-n, p.alpha, d.w, 1.0).abs_ratio for n in range(1, 3))
    out.append(("spatial wronskian zero at rho=-n", worst, 1e-10))

    worst = max(spatial_residual(n, p, t) for n in range(6) for t in (0.3, 1.0, 2.0))
    out.append(("spatial eigen-ODE residual", worst, 1e-8))
    worst = max(energy_residual(eigenmode(n, d, p.beta), d.kappa, p.beta, x, x0)
                for n in range(6) for x in (0.2, 1.0, 5.0) for x0 in (0.1, 10.0))
    out.append(("energy eigen-ODE residual", worst, 1e-8))
    worst = max(transport_residual(p, tau0, chi0, t, x, c)
                for t in (0.01, 1.0, 1.5) for x in (0.5, 2.0, 8.0) if abs(x - chi0) > 0.01)
    out.append(("transport residual", worst, 1e-4))

    h = 1e-4
    nd = [number_density_closed(p, tau0, tau0 + k * h) for k in (-2, -1, 1, 2)]
    # One-sided second-order slopes on each side of tau0.
    n0 = number_density_closed(p, tau0, tau0)
    left = (3 * n0 - 4 * nd[1] + nd[0]) / (2 * h)
    right = (-3 * n0 + 4 * nd[2] - nd[3]) / (2 * h)
    jump = density_jump(p)
    out.append(("density derivative jump", abs((right - left) / jump - 1.0), 1e-5))

    worst = max(abs(number_density_series(p, tau0, t, n_terms=100)
                    / number_density_closed(p, tau0, t) - 1.0) for t in (0.01, 1.0, 1.5))
    out.append(("density series vs closed", worst, 1e-6))

    worst = max(abs(kg_closed(eigenmode(n, d, p.beta), d.kappa, p.beta, chi0)
                    / kg_quadrature(eigenmode(n, d, p.beta), d.kappa, chi0) - 1.0) for n in range(3))
    out.append(("K_G closed vs quadrature", worst, 1e-6))
    return out


def run_validate(cfg: RunConfig) -> int:
    """Print one line per invariant; exit 0 only if every check passes."""
    ok = True
    for name, measured, target in validation_checks(cfg):
        loose = cfg.control.rel_tol > target
        good = measured < target and not loose
        ok &= good
        status = "PASS" if good else ("FLAG" if loose else "FAIL")
        note = f"  (rel_tol {cfg.control.rel_tol:.1e} looser than target)" if loose else ""
        print(f"{status} {name}: measured {measured:.3e} target {target:.1e}{note}")
    print("all checks passed" if ok else "validation failed")
    return 0 if ok else 2


_RUNNERS = {
    "spectrum": run_spectrum,
    "density": run_density,
    "identity": run_identity,
    "validate": run_validate,
    "convolve": run_convolve,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pulsar-green", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value configuration file")
    for key in _KEYS:
        parser.add_argument(f"--{key}", dest=f"opt_{key}", metavar=key.upper())
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = make_parser().parse_args(argv)
        raw = read_config_file(ns.config) if ns.config else {}
        for key in _KEYS:
            v = getattr(ns, f"opt_{key}")
            if v is not None:
                raw[key] = v
        cfg = build_config(ns.command, raw)
        return _RUNNERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
