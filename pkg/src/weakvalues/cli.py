"""Command line scenario runner.

Each subcommand evaluates one kind of table for every scenario in the config
(or a built-in default suite), writes CSV files and prints a short summary.

Exit codes: 0 success, 2 configuration error, 3 numerical contract
violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import analysis
from .config import ScenarioConfig, load_config
from .entangler import ingest_joint_amplitudes, read_gamma_csv, von_neumann_entangle
from .errors import ConfigError, WeakValueError, ZeroPostSelection
from .grid import DEFAULT_POINTS
from .hilbert import SystemState, random_state
from .pointers import PointerFamily, condition_residuals, pointer_matrices
from .readout import (brute_force_oracle, conditional_expectation, full_readout,
                      post_selection_probability)

ORACLE_RTOL = 1e-8
ORACLE_ATOL = 1e-12

DEFAULT_SUITES = {
    "distinguishability": [ScenarioConfig(name="curves", eta_range=(0.0, 3.0, 0.01))],
    "shift-sweep": [
        ScenarioConfig(name="theta_sweep", families=("pulse",), eta=("0.12", "zero:0.39", "0.75"),
                       sweep="theta", params=(0.0, np.pi, 181)),
        ScenarioConfig(name="phi_sweep", families=("pulse",), eta=("0.12", "zero:0.39", "0.75"),
                       sweep="phi", params=(0.0, 2 * np.pi, 181)),
    ],
    "echo-scan": [ScenarioConfig(name="echoes")],
    "verify-conditions": [ScenarioConfig(name="conditions",
                                         eta=("0", "0.01", "0.12", "0.39", "0.75"))],
    "aav-convergence": [ScenarioConfig(
        name="aav", eta=tuple(repr(0.04 / 2 ** k) for k in range(7)))],
    "oracle-check": [ScenarioConfig(
        name="oracle",
        eta=("0.01", "0.12", "0.39", "0.75", repr(np.pi + 0.05), repr(2 * np.pi + 0.05)))],
    "readout": [],
}


def fmt(x) -> str:
    """Fixed 12-significant-digit formatting; ``None`` becomes an empty field."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if x == 0:
        x = 0.0
    return f"{x:.12g}"


@dataclass
class Table:
    name: str
    header: list[str]
    rows: list[list]
    summary: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()


class Runner:
    def __init__(self, cfg: ScenarioConfig, args):
        self.cfg = cfg
        n_points = args.grid_points or cfg.grid_points or DEFAULT_POINTS
        halfwidth = args.domain_halfwidth or cfg.domain_halfwidth
        self.opts = analysis.GridOptions(n_points, halfwidth)
        threshold = args.echo_threshold if args.echo_threshold is not None else cfg.threshold
        self.threshold = analysis.ECHO_THRESHOLD if threshold is None else threshold

    def etas(self, family: PointerFamily) -> list[float]:
        out = []
        for tok in self.cfg.eta_tokens():
            if tok.startswith("zero:"):
                guess = float(tok.split(":", 1)[1])
                root = analysis.nearest_zero_crossing(family, self.cfg.observable, guess,
                                                      opts=self.opts)
                if root is None:
                    raise ConfigError(f"[{self.cfg.name}] {family.name} pointer: "
                                      f"no D_10 zero crossing near {guess}")
                out.append(root)
            else:
                out.append(float(tok))
        return out

    def need_qubit_system(self, what: str):
        if len(self.cfg.eigenvalues) != 2:
            raise ConfigError(f"[{self.cfg.name}] {what} needs a two-level system")

    def distinguishability(self):
        A = self.cfg.observable
        rows = []
        for fam in self.cfg.family_objects():
            for r in analysis.distinguishability_sweep(fam, A, self.etas(fam), self.opts):
                rows.append([r.family, r.eta, r.D10.real, r.D10.imag, abs(r.D10)])
        summary = "; ".join(
            f"{row[0]} D10({fmt(row[1])})={fmt(row[2])}" for row in rows if row[1] == rows[0][1])
        yield Table(f"distinguishability_{self.cfg.name}",
                    ["family", "eta", "D10_re", "D10_im", "D10_abs"], rows, summary)

    def shift_sweep(self):
        self.need_qubit_system("shift-sweep")
        A, f = self.cfg.observable, self.cfg.f_state
        params = self.cfg.param_values()
        for fam in self.cfg.family_objects():
            for eta in self.etas(fam):
                sweep = analysis.shift_sweep(fam, A, eta, params, f, self.cfg.sweep,
                                             self.cfg.eta_bar, self.threshold, self.opts)
                rows = [[r.param, r.prob, r.chi_shift, r.mu_shift, r.norm_chi, r.norm_mu,
                         None if r.reference is None else r.reference.real,
                         None if r.reference is None else r.reference.imag, r.status]
                        for r in sweep]
                chis = [r.norm_chi for r in sweep if r.norm_chi is not None]
                regime = analysis.classify_strength(fam, A, eta, self.threshold, self.opts)
                summary = (f"{fam.name} eta={fmt(eta)} ({regime.name}): norm_chi in "
                           f"[{fmt(min(chis))}, {fmt(max(chis))}]" if chis else "no valid rows")
                yield Table(f"shift-sweep_{self.cfg.name}_{fam.name}_eta{eta:.6g}",
                            ["param", "prob", "chi_shift", "mu_shift", "norm_chi", "norm_mu",
                             "ref_re", "ref_im", "status"], rows, summary)

    def echo_scan(self):
        A = self.cfg.observable
        for fam in self.cfg.family_objects():
            points = analysis.echo_scan(fam, A, tuple(self.cfg.scan_range),
                                        self.cfg.exclude_origin, self.threshold,
                                        opts=self.opts)
            rows = [[p.eta_star, p.D_value.real, p.D_value.imag, p.eta_bar, p.flipped]
                    for p in points]
            summary = f"{fam.name}: {len(points)} echo point(s)" + "".join(
                f" eta*={fmt(p.eta_star)}{' (flipped)' if p.flipped else ''}" for p in points)
            yield Table(f"echo-scan_{self.cfg.name}_{fam.name}",
                        ["eta_star", "D_re", "D_im", "eta_bar", "flipped"], rows, summary)

    def verify_conditions(self):
        A = self.cfg.observable
        rows = []
        for fam in self.cfg.family_objects():
            for eta in self.etas(fam):
                M = pointer_matrices(fam, eta, A, self.opts.grid(fam, eta, A))
                rows.append([fam.name, eta, *condition_residuals(M)])
        worst = max(rows, key=lambda r: r[2])
        yield Table(f"verify-conditions_{self.cfg.name}",
                    ["family", "eta", "r_D", "r_chi", "r_mu"], rows,
                    f"largest r_D {fmt(worst[2])} ({worst[0]}, eta={fmt(worst[1])})")

    def aav_convergence(self):
        A, psi, f = self.cfg.observable, self.cfg.psi_state, self.cfg.f_state
        for fam in self.cfg.family_objects():
            conv = analysis.aav_convergence(fam, A, psi, f, self.etas(fam), self.opts)
            orders = [None] + analysis.convergence_orders(conv)
            rows = [[r.eta, r.shift.real, r.shift.imag, r.weak_value.real, r.weak_value.imag,
                     r.error, order] for r, order in zip(conv, orders)]
            summary = f"{fam.name}: final error {fmt(conv[-1].error)}"
            if len(conv) > 1:
                summary += f", measured order {orders[-1]:.3f}"
            yield Table(f"aav-convergence_{self.cfg.name}_{fam.name}",
                        ["eta", "shift_re", "shift_im", "wv_re", "wv_im", "error", "order"],
                        rows, summary)

    def oracle_check(self):
        A = self.cfg.observable
        dim = len(self.cfg.eigenvalues)
        rows, failures = [], 0
        for fam in self.cfg.family_objects():
            rng = np.random.default_rng(self.cfg.seed)
            pairs = [(random_state(dim, rng), random_state(dim, rng))
                     for _ in range(self.cfg.trials)]
            for eta in self.etas(fam):
                grid = self.opts.grid(fam, eta, A)
                for trial, (psi, f) in enumerate(pairs):
                    state = von_neumann_entangle(psi, A, fam, eta, grid)
                    for obs in ("chi", "mu"):
                        try:
                            a = conditional_expectation(state, f, obs)
                            b = brute_force_oracle(state, f, obs)
                        except ZeroPostSelection:
                            rows.append([fam.name, eta, trial, obs, None, None, None,
                                         "zero_post_selection"])
                            continue
                        err = abs(a - b)
                        ok = err <= ORACLE_ATOL + ORACLE_RTOL * max(abs(a), abs(b))
                        failures += not ok
                        rel = err / max(abs(a), abs(b), ORACLE_ATOL)
                        rows.append([fam.name, eta, trial, obs, a, b, rel,
                                     "ok" if ok else "mismatch"])
        table = Table(f"oracle-check_{self.cfg.name}",
                      ["family", "eta", "trial", "observable", "matrix", "brute", "rel_err",
                       "status"], rows, f"{len(rows)} comparisons, {failures} mismatch(es)")
        table.failures = failures
        yield table

    def readout(self):
        if self.cfg.gamma_file is None:
            raise ConfigError(f"[{self.cfg.name}] readout needs gamma_file")
        try:
            gamma = read_gamma_csv(self.cfg.gamma_file)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"[{self.cfg.name}] gamma_file: {exc}") from None
        try:
            state = ingest_joint_amplitudes(gamma)
        except ValueError as exc:
            raise ConfigError(f"[{self.cfg.name}] gamma_file: {exc}") from None
        if state.family is None:
            raise ConfigError(f"[{self.cfg.name}] readout supports two-level pointers only")
        f = SystemState.normalized(self.cfg.f)
        if f.dim != state.dim:
            raise ConfigError(f"[{self.cfg.name}] f has dimension {f.dim}, "
                              f"gamma has {state.dim} system rows")
        A = self.cfg.observable if len(self.cfg.eigenvalues) == state.dim else None
        if self.cfg.eta_eff is not None:
            r = full_readout(state, f, A, eta_eff=self.cfg.eta_eff)
            shift = r.complex_shift
        else:
            r = None
            shift = None
        prob = post_selection_probability(state, f)
        chi = conditional_expectation(state, f, "chi")
        mu = conditional_expectation(state, f, "mu")
        ref = r.reference_weak_value if r is not None else None
        row = [prob, chi, mu, None if shift is None else shift.real,
               None if shift is None else shift.imag,
               None if ref is None else ref.real, None if ref is None else ref.imag]
        yield Table(f"readout_{self.cfg.name}",
                    ["prob", "chi", "mu", "shift_re", "shift_im", "ref_re", "ref_im"], [row],
                    f"prob={fmt(prob)} <chi>={fmt(chi)} <mu>={fmt(mu)}")


COMMANDS = {
    "distinguishability": Runner.distinguishability,
    "shift-sweep": Runner.shift_sweep,
    "echo-scan": Runner.echo_scan,
    "verify-conditions": Runner.verify_conditions,
    "aav-convergence": Runner.aav_convergence,
    "oracle-check": Runner.oracle_check,
    "readout": Runner.readout,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakvalues",
        description="Exact post-selected pointer readouts, weak values and weak echoes.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="scenario file (default: built-in suite)")
    parser.add_argument("--out", default="results",
                        help="output directory, or a .csv path when one table is produced")
    parser.add_argument("--grid-points", type=int, help="pointer grid nodes (odd, >= 256)")
    parser.add_argument("--domain-halfwidth", type=float, help="pointer grid half-width L")
    parser.add_argument("--echo-threshold", type=float,
                        help=f"minimum |D_10| for an echo (default {analysis.ECHO_THRESHOLD})")
    return parser


def _check_args(args):
    if args.grid_points is not None and (args.grid_points < 256 or args.grid_points % 2 == 0):
        raise ConfigError("--grid-points must be odd and >= 256")
    if args.domain_halfwidth is not None and not args.domain_halfwidth > 0:
        raise ConfigError("--domain-halfwidth must be positive")
    if args.echo_threshold is not None and not 0 <= args.echo_threshold <= 1:
        raise ConfigError("--echo-threshold must lie in [0, 1]")


def write_tables(tables: list[Table], out: str) -> list[Path]:
    out = Path(out)
    if out.suffix == ".csv" and len(tables) == 1:
        targets = [out]
    else:
        targets = [out / f"{t.name}.csv" for t in tables]
    paths = []
    for table, path in zip(tables, targets):
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(table.to_csv())
        paths.append(path)
    return paths


def run(command: str, args) -> int:
    try:
        _check_args(args)
        if args.config:
            scenarios = load_config(args.config)
        else:
            scenarios = DEFAULT_SUITES[command]
            if not scenarios:
                raise ConfigError(f"{command} needs --config")
        tables = []
        for cfg in scenarios:
            tables.extend(COMMANDS[command](Runner(cfg, args)))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except WeakValueError as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return 3
    paths = write_tables(tables, args.out)
    for table, path in zip(tables, paths):
        print(f"{path}: {table.summary}")
    if any(getattr(t, "failures", 0) for t in tables):
        print("oracle mismatch beyond tolerance", file=sys.stderr)
        return 3
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
