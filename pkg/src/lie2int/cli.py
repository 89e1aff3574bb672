"""Command-line entry point: ``lie2int <command> [options]``.

Exit status is 0 when every check passes, 1 when some check fails and 2
for unusable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .algebra import antisymmetry_residual, check_alg_crossed_module, jacobi_residual
from .catalog import so3, so3_vector
from .groups import check_grp_crossed_module, endpoint
from .io import InputError, Loader
from .morita import (
    InvalidBigonError,
    corrected_residual,
    obstruction_check,
    psi,
    roundtrip,
    solve_delta_b,
    validate_bigon,
)
from .morphisms import integrate_morphism, morphism_residuals, pushforward_homotopy
from .paths import (
    GridSpec,
    PathGenerator,
    SampledPath,
    SurfaceGenerator,
    bigon_residual,
    bigon_tolerance,
    flow_bigon,
)

TOL_ENV = "LIE2INT_TOL"
EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list
    grid: GridSpec
    tol: float | None
    seed: int
    fmt: str
    options: dict = field(default_factory=dict)


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, name, residual, tolerance):
        self.checks.append(Check(name, float(residual), float(tolerance)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def machine(self) -> str:
        lines = [
            json.dumps({"check": c.name, "residual": c.residual, "tolerance": c.tolerance,
                        "verdict": "pass" if c.passed else "fail"}, sort_keys=True)
            for c in self.checks
        ]
        lines.append(json.dumps({
            "command": self.command, "overall": "pass" if self.passed else "fail",
            "provenance": self.provenance, "payload": self.payload, "notes": self.notes,
        }, sort_keys=True))
        return "\n".join(lines)

    def human(self) -> str:
        width = max([len(c.name) for c in self.checks] + [5])
        out = [f"{self.command}", f"{'check':<{width}}  {'residual':>11}  {'tolerance':>11}  verdict"]
        for c in self.checks:
            out.append(f"{c.name:<{width}}  {c.residual:11.3e}  {c.tolerance:11.3e}  "
                       f"{'pass' if c.passed else 'FAIL'}")
        for note in self.notes:
            out.append(f"note: {note}")
        for key, value in self.payload.items():
            out.append(f"{key}: {json.dumps(value)}")
        out.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(out)


def _matrix(m) -> list:
    return np.asarray(m).tolist()


def _tol(cfg: RunConfig, default: float) -> float:
    return default if cfg.tol is None else cfg.tol


def _only_input(cfg: RunConfig, default=None):
    if cfg.inputs:
        return cfg.inputs[0]
    if default is None:
        raise InputError(f"{cfg.command} needs --input")
    return default


# -- commands ---------------------------------------------------------------------------


def cmd_check_algebra(cfg: RunConfig, loader: Loader) -> Report:
    rep = Report(cfg.command)
    tol = _tol(cfg, 1e-10)
    for ref in cfg.inputs or ["builtin:so3"]:
        L = loader.algebra(ref)
        rep.add(f"{ref}:antisymmetry", antisymmetry_residual(L.c), tol)
        rep.add(f"{ref}:jacobi", jacobi_residual(L), tol)
    return rep


def cmd_check_crossed_module(cfg: RunConfig, loader: Loader) -> Report:
    rep = Report(cfg.command)
    gcm = loader.crossed_module(_only_input(cfg, "builtin:derivation:so3"))
    for name, value in check_alg_crossed_module(gcm.cm).items():
        rep.add(f"algebra:{name}", value, 1e-10)
    N = cfg.grid.N
    for name, value in check_grp_crossed_module(gcm, cfg.options.get("samples", 8),
                                                cfg.seed, n=N).items():
        rep.add(f"group:{name}", value, _tol(cfg, 1e-5))
    if not gcm.sound:
        rep.notes.append("a realization is not simply connected: group-level checks are "
                         "necessary conditions only")
    return rep


def cmd_psi(cfg: RunConfig, loader: Loader) -> Report:
    rep = Report(cfg.command)
    N, M, _ = cfg.grid.sizes
    gcm, B = loader.bigon(_only_input(cfg), N, M, cfg.seed)
    tol = _tol(cfg, bigon_tolerance(B))
    rep.add("bigon_residual", bigon_residual(B), tol)
    rep.add("boundary", B.boundary_defect(), 0.0)
    try:
        validate_bigon(B, tol)
    except InvalidBigonError as exc:
        rep.notes.append(f"refused: {exc}")
        return rep
    image = psi(B, gcm, tol)
    rep.add("corrected_residual", image.residual, tol)
    rep.add("obstruction", image.obstruction.discrepancy, 1e-5)
    rep.payload = {"g": _matrix(image.element.g.matrix), "h": _matrix(image.element.h.matrix)}
    if not image.obstruction.sound:
        rep.notes.append("H0 realization is not simply connected: class checks are necessary only")
    return rep


def cmd_roundtrip(cfg: RunConfig, loader: Loader) -> Report:
    rep = Report(cfg.command)
    N, M, K = cfg.grid.sizes
    gcm, B = loader.bigon(_only_input(cfg), N, M, cfg.seed)
    try:
        validate_bigon(B, cfg.tol)
    except InvalidBigonError as exc:
        rep.add("bigon_residual", bigon_residual(B), _tol(cfg, bigon_tolerance(B)))
        rep.notes.append(f"refused: {exc}")
        return rep
    r = roundtrip(B, gcm, K)
    tol = _tol(cfg, 1e-5)
    rep.add("roundtrip:g", r.g_gap, tol)
    rep.add("roundtrip:h", r.h_gap, tol)
    rep.add("roundtrip:source", r.source_gap, tol)
    rep.add("roundtrip:target_class", r.target_class.discrepancy, tol)
    rep.add("zeta:boundary", r.zeta_boundary_defect, 0.0)
    h2 = sum(h * h for h in r.steps)
    for label, res in (("solution_vs_cubic", r.cube_solution_vs_cubic),
                       ("cubic_vs_quartic", r.cube_cubic_vs_quartic)):
        for eq, value in res.items():
            rep.add(f"cube:{label}:{eq}", value, 10.0 * h2)
    return rep


def cmd_integrate_morphism(cfg: RunConfig, loader: Loader) -> Report:
    rep = Report(cfg.command)
    N, M, _ = cfg.grid.sizes
    f, gcm, a, b = loader.morphism(_only_input(cfg, "demo:so3xr3_extension"), N, M)
    r1, r2 = morphism_residuals(f)
    coherence = _tol(cfg, 1e-10)
    rep.add("morphism:r1", r1, coherence)
    rep.add("morphism:r2", r2, coherence)
    if max(r1, r2) > coherence:
        rep.notes.append("refused: (mu, nu) fails the coherence equations")
        return rep
    B = pushforward_homotopy(f, a, b)
    rep.add("pushforward:bigon_residual", bigon_residual(B), 10.0 * (B.ht**2 + B.hs**2))
    x = integrate_morphism(f, a, b, gcm)
    rep.payload = {"g": _matrix(x.g.matrix), "h": _matrix(x.h.matrix)}
    return rep


def _develop_error(n: int) -> float:
    """Endpoint error against Rodrigues for a quarter turn with nonuniform speed."""
    L = so3()
    R = so3_vector(L)
    t = np.linspace(0.0, 1.0, n + 1)
    a = np.zeros((n + 1, 3))
    a[:, 2] = 0.5 * np.pi * 6.0 * t * (1.0 - t)
    exact = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    return float(np.max(np.abs(endpoint(SampledPath(L, a), R).matrix - exact)))


def _bigon_error(n: int) -> float:
    """Residual of a flowed so(3) derivation bigon (scheme error only)."""
    from .catalog import builtin_crossed_module

    A = builtin_crossed_module("so3").two_algebra
    a0 = PathGenerator("polynomial", 0.1 * np.arange(9).reshape(3, 3) / 8.0, "bump").sample(A.h0, n)
    b = SurfaceGenerator("fourier", 0.1 * np.ones((3, 2, 2)))
    z = SurfaceGenerator("fourier", 0.1 * np.ones((3, 2, 1)))
    return bigon_residual(flow_bigon(A, a0, b, z, n))


def _quadrature_error(n: int) -> float:
    """Abelian, dM = 0: Delta b(1, s) against the exact integral of -z."""
    from .algebra import StrictLie2Algebra
    from .paths import BigonData

    A = StrictLie2Algebra(np.zeros((1, 1)), np.zeros((1, 1, 1)), np.zeros((1, 1, 1)))
    t, s = np.meshgrid(np.linspace(0, 1, n + 1), np.linspace(0, 1, n + 1), indexing="ij")
    z = (t * (1 - t) * (1 + s))[..., None]
    B = BigonData(A, np.zeros_like(z), np.zeros_like(z), z)
    exact = -(1.0 + s[0]) / 6.0
    return float(np.max(np.abs(solve_delta_b(B).values[-1, :, 0] - exact)))


CONVERGENCE = {
    "develop": (_develop_error, "order", 3.5),
    "bigon": (_bigon_error, "order", 1.8),
    "quadrature": (_quadrature_error, "error", 1e-12),
}


def cmd_convergence(cfg: RunConfig, loader: Loader) -> Report:
    rep = Report(cfg.command)
    name = cfg.options.get("check", "develop")
    if name not in CONVERGENCE:
        raise InputError(f"unknown convergence check {name!r}; choose from {sorted(CONVERGENCE)}")
    fn, kind, threshold = CONVERGENCE[name]
    ns = [cfg.grid.N, 2 * cfg.grid.N, 4 * cfg.grid.N]
    errs = [fn(n) for n in ns]
    rep.payload = {"N": ns, "errors": errs}
    if kind == "order":
        orders = [float(np.log2(e0 / e1)) for e0, e1 in zip(errs, errs[1:])]
        rep.payload["orders"] = orders
        # an order is checked as a shortfall below the threshold
        for (n0, n1), p in zip(zip(ns, ns[1:]), orders):
            rep.add(f"{name}:order[{n0}->{n1}]", max(0.0, threshold - p), 0.0)
    else:
        for n, e in zip(ns, errs):
            rep.add(f"{name}:error[{n}]", e, _tol(cfg, threshold))
    return rep


COMMANDS = {
    "check-algebra": cmd_check_algebra,
    "check-crossed-module": cmd_check_crossed_module,
    "psi": cmd_psi,
    "roundtrip": cmd_roundtrip,
    "integrate-morphism": cmd_integrate_morphism,
    "convergence": cmd_convergence,
}


def _grid(text: str) -> GridSpec:
    try:
        sizes = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be N[,M[,K]], got {text!r}") from None
    if not 1 <= len(sizes) <= 3:
        raise argparse.ArgumentTypeError("grid takes one to three sizes")
    try:
        return GridSpec(*sizes)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lie2int", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", nargs="+", default=[], help="definition files or demo:/builtin: refs")
        p.add_argument("--grid", type=_grid, default=None, help="N[,M[,K]] segment counts (each >= 8)")
        p.add_argument("--tol", type=_positive, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("human", "machine"), default="human")
        if name == "convergence":
            p.add_argument("--check", choices=sorted(CONVERGENCE), default="develop")
        if name == "check-crossed-module":
            p.add_argument("--samples", type=int, default=8)
    return parser


DEFAULT_GRIDS = {"convergence": GridSpec(64), "check-crossed-module": GridSpec(256)}


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    tol = args.tol
    if tol is None and os.environ.get(TOL_ENV):
        try:
            tol = _positive(os.environ[TOL_ENV])
        except (ValueError, argparse.ArgumentTypeError):
            raise InputError(f"{TOL_ENV} must be a positive number") from None
    grid = args.grid or DEFAULT_GRIDS.get(args.command, GridSpec(64))
    options = {k: getattr(args, k) for k in ("check", "samples") if hasattr(args, k)}
    return RunConfig(args.command, list(args.input), grid, tol, args.seed, args.format, options)


def run(cfg: RunConfig) -> Report:
    loader = Loader()
    rep = COMMANDS[cfg.command](cfg, loader)
    rep.provenance = {
        "inputs": dict(sorted(loader.hashes.items())),
        "grid": list(cfg.grid.sizes),
        "seed": cfg.seed,
        "tol": cfg.tol,
        "rng": "numpy PCG64 (default_rng)",
    }
    return rep


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        rep = run(cfg)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INPUT if exc.code else EXIT_PASS
    except InputError as exc:
        print(f"lie2int: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(rep.machine() if cfg.fmt == "machine" else rep.human())
    return EXIT_PASS if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
