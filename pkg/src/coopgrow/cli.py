"""Batch command-line front-end.

Four subcommands wrap the library: ``transition`` and ``fixation`` run the
two ensemble experiments, ``netgen`` grows a single network and dumps its
edge list, ``run`` records one trajectory. Every output CSV embeds the
resolved configuration (minus the worker count, which never affects file
contents) and the master seed, so any file can be reproduced byte for byte
from its own header.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import ConfigError, RunConfig, parse_config, r_grid
from .experiments import (
    NoTransitionError,
    SeedSizeNotFound,
    cooperative_seed_size,
    estimate_rc,
    fixation_probability,
    transition_curve,
    write_fixation_csv,
    write_transition_csv,
)
from .network import Network, write_edge_list
from .simulation import SimParams, run_realization, write_trajectory_csv
from .stats import degree_histogram, write_histogram_csv

__all__ = ["main"]

_FLAGS = [
    ("--mechanism", {"choices": ["ba", "random"], "help": "attachment rule for new nodes"}),
    ("--L", {"metavar": "INT", "help": "links per new node (seed clique size)"}),
    ("--beta", {"metavar": "X", "help": "selection intensity"}),
    ("--n", {"metavar": "X", "help": "population growth fraction per generation"}),
    ("--r", {"metavar": "X", "help": "benefit-cost ratio (run command)"}),
    ("--pc-growth", {"metavar": "X", "help": "probability a newcomer cooperates (run command)"}),
    ("--r-min", {"metavar": "X", "help": "lower end of the r grid"}),
    ("--r-max", {"metavar": "X", "help": "upper end of the r grid"}),
    ("--r-steps", {"metavar": "INT", "help": "number of r grid points"}),
    ("--ni", {"metavar": "INT", "help": "initial cooperator count"}),
    ("--nmax", {"metavar": "INT", "help": "population at which a run stops (netgen: network size)"}),
    ("--realizations", {"metavar": "INT", "help": "runs per r grid point"}),
    ("--M", {"metavar": "INT", "help": "trials per initial size (fixation)"}),
    ("--ni-list", {"metavar": "N1,N2,...", "help": "initial sizes for the fixation sweep"}),
    ("--n-target", {"metavar": "INT", "help": "population a fixation trial must reach"}),
    ("--seed", {"metavar": "INT", "help": "master seed"}),
    ("--workers", {"metavar": "INT", "help": "parallel worker processes"}),
    ("--out-dir", {"metavar": "DIR", "help": "directory for output files"}),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coopgrow",
        description="Cooperation dynamics on growing networks: batch experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "transition": (cmd_transition, "sweep the benefit-cost ratio and record stationary cooperation"),
        "fixation": (cmd_fixation, "estimate fixation probability against initial cooperator count"),
        "netgen": (cmd_netgen, "grow one network and write its edge list and degree histogram"),
        "run": (cmd_run, "record a single growth + update trajectory"),
    }
    for name, (func, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="FILE", default=None, help="key=value config file")
        for flag, kwargs in _FLAGS:
            p.add_argument(flag, default=argparse.SUPPRESS, **kwargs)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "config", "func")
    }
    try:
        cfg = parse_config(args.config, overrides)
        os.makedirs(cfg.out_dir, exist_ok=True)
        return args.func(cfg)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _metadata(cfg: RunConfig) -> dict:
    """Resolved config as a flat header block; workers excluded on purpose:
    the worker count may never influence output bytes."""
    meta = {
        "mechanism": cfg.mechanism.value,
        "L": cfg.L,
        "beta": cfg.beta,
        "n": cfg.n,
        "r": cfg.r,
        "pc_growth": cfg.pc_growth,
        "ni": cfg.ni,
        "nmax": cfg.nmax,
        "r_min": cfg.r_min,
        "r_max": cfg.r_max,
        "r_steps": cfg.r_steps,
        "realizations": cfg.realizations,
        "M": cfg.M,
        "ni_list": ",".join(str(x) for x in cfg.ni_list),
        "n_target": cfg.n_target,
        "master_seed": cfg.seed,
        "out_dir": cfg.out_dir,
    }
    return meta


def _write_plot_script(path: str, cfg: RunConfig, lines: list[str]) -> None:
    from .simulation import _write_metadata

    with open(path, "w") as fh:
        _write_metadata(fh, _metadata(cfg))
        fh.write("set datafile separator \",\"\n")
        for line in lines:
            fh.write(line + "\n")


def cmd_transition(cfg: RunConfig) -> int:
    curve = transition_curve(
        mechanism=cfg.mechanism,
        L=cfg.L,
        beta=cfg.beta,
        n=cfg.n,
        r_grid=r_grid(cfg),
        ni=cfg.ni,
        nmax=cfg.nmax,
        realizations=cfg.realizations,
        master_seed=cfg.seed,
        workers=cfg.workers,
    )
    csv_path = os.path.join(cfg.out_dir, "transition.csv")
    write_transition_csv(curve, csv_path, metadata=_metadata(cfg))
    _write_plot_script(
        os.path.join(cfg.out_dir, "transition.gp"),
        cfg,
        [
            'set xlabel "benefit-cost ratio r"',
            'set ylabel "stationary cooperation fraction"',
            "set yrange [0:1.05]",
            'plot "transition.csv" skip 1 using 1:2:3 with yerrorlines pt 7 title "ensemble mean"',
        ],
    )
    print(f"wrote {csv_path}")
    try:
        rc = estimate_rc(curve)
        print(f"critical ratio bracket: ({rc.lower:.6g}, {rc.upper:.6g}), midpoint {rc.midpoint:.6g}")
    except NoTransitionError as exc:
        print(f"no threshold crossing in this grid: {exc}")
    return 0


def cmd_fixation(cfg: RunConfig) -> int:
    curve = fixation_probability(
        mechanism=cfg.mechanism,
        L=cfg.L,
        beta=cfg.beta,
        n=cfg.n,
        r=cfg.r,
        ni_list=cfg.ni_list,
        M=cfg.M,
        n_target=cfg.n_target,
        master_seed=cfg.seed,
        workers=cfg.workers,
    )
    csv_path = os.path.join(cfg.out_dir, "fixation.csv")
    write_fixation_csv(curve, csv_path, metadata=_metadata(cfg))
    _write_plot_script(
        os.path.join(cfg.out_dir, "fixation.gp"),
        cfg,
        [
            'set xlabel "initial cooperators"',
            'set ylabel "fixation probability"',
            "set yrange [0:1.05]",
            'plot "fixation.csv" skip 1 using 1:4:5:6 with yerrorbars pt 7 title "P_f"',
        ],
    )
    print(f"wrote {csv_path}")
    try:
        nc = cooperative_seed_size(curve)
        print(f"cooperative seed size: {nc}")
    except SeedSizeNotFound as exc:
        print(f"cooperative seed not reached: {exc}")
    return 0


def cmd_netgen(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    net = Network(cfg.L)
    while net.num_nodes < cfg.nmax:
        net.add_node(cfg.mechanism, cfg.L, rng)
    edge_path = os.path.join(cfg.out_dir, "network.edges")
    write_edge_list(net, edge_path, mechanism=cfg.mechanism, L=cfg.L, seed=cfg.seed)
    hist_path = os.path.join(cfg.out_dir, "degree_hist.csv")
    write_histogram_csv(degree_histogram(net), hist_path, metadata=_metadata(cfg))
    _write_plot_script(
        os.path.join(cfg.out_dir, "degree_hist.gp"),
        cfg,
        [
            "set logscale xy",
            'set xlabel "degree k"',
            'set ylabel "node count"',
            'plot "degree_hist.csv" skip 1 using 1:2 with points pt 7 title "degree histogram"',
        ],
    )
    print(f"wrote {edge_path} ({net.num_nodes} nodes, {net.edge_count} edges)")
    return 0


def cmd_run(cfg: RunConfig) -> int:
    params = SimParams(
        r=cfg.r,
        beta=cfg.beta,
        n=cfg.n,
        L=cfg.L,
        mechanism=cfg.mechanism,
        pc_growth=cfg.pc_growth,
        seed=cfg.seed,
    )
    traj = run_realization(params, cfg.ni, cfg.nmax)
    csv_path = os.path.join(cfg.out_dir, "trajectory.csv")
    write_trajectory_csv(traj, csv_path, metadata=_metadata(cfg))
    _write_plot_script(
        os.path.join(cfg.out_dir, "trajectory.gp"),
        cfg,
        [
            'set xlabel "generation"',
            'set ylabel "cooperation fraction"',
            "set yrange [0:1.05]",
            'plot "trajectory.csv" skip 1 using 1:3 with lines title "cooperation"',
        ],
    )
    print(f"wrote {csv_path} ({len(traj)} generations, final fraction {traj.final_fraction:.6g})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
