"""Command-line experiment runner.

Subcommands: ground, excited, exact, hadamard, compile-perm, verify.
Every CSV has a header row and a trailing comment recording the config
hash and package version, and is byte-identical for identical configs.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__, hadamard
from .config import RunConfig, build_config, config_hash, parse_config_file
from .hamiltonian import HeisenbergRing, LanczosError, lanczos_ground, lowest_in_spin_sector
from .symmetry import (
    CyclicGroup,
    amida_decompose,
    long_range_swap_perm,
    momentum_sectors,
    swap_count_bound,
)
from .vqe import run_excited, run_ground


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _meta_line(cfg: RunConfig, extra: str = "") -> str:
    tail = f" {extra}" if extra else ""
    return f"# config_hash={config_hash(cfg)} version={__version__}{tail}\n"


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--n-sites", type=int, dest="n_sites")
    p.add_argument("--layers", type=int, dest="n_layers")
    p.add_argument("--coupling", type=float)
    p.add_argument(
        "--sector",
        dest="sector",
        help="momentum index m, or 'none' to disable the projection",
    )
    p.add_argument("--reference", choices=("singlet", "triplet"))
    p.add_argument("--alpha", type=float, help="learning rate in units of 1/J")
    p.add_argument("--iters", type=int, dest="k_max")
    p.add_argument("--seed", type=int)
    p.add_argument("--eps-reg", type=float, dest="eps_reg")
    p.add_argument("--out", help="output path ('-' = stdout)")


def _config_from_args(args: argparse.Namespace, mode: str) -> RunConfig:
    file_values = parse_config_file(args.config) if getattr(args, "config", None) else {}
    overrides = {
        key: value
        for key in ("n_sites", "n_layers", "coupling", "reference", "alpha",
                    "k_max", "seed", "eps_reg", "out")
        if (value := getattr(args, key, None)) is not None
    }
    sector = getattr(args, "sector", None)
    if sector is not None:
        overrides["sector"] = None if str(sector).lower() == "none" else int(sector)
    overrides["mode"] = mode
    cfg = build_config(file_values, overrides)
    cfg.validate()
    return cfg


def cmd_ground(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, "ground")
    res = run_ground(
        cfg.n_sites,
        cfg.n_layers,
        m=cfg.sector,
        reference=cfg.reference,
        coupling=cfg.coupling,
        alpha=cfg.alpha,
        k_max=cfg.k_max,
        seed=cfg.seed,
        eps_reg=cfg.eps_reg,
        oracle="auto",
    )
    lines = ["k,energy_per_site,norm,fidelity,grad_norm\n"]
    for row in res.trace:
        lines.append(
            f"{row.k},{_fmt(row.energy_per_site)},{_fmt(row.norm)},"
            f"{_fmt(row.fidelity)},{_fmt(row.grad_norm)}\n"
        )
    exact_per_site = res.oracle_energy / (cfg.coupling * cfg.n_sites)
    lines.append(_meta_line(cfg, f"exact_energy_per_site={_fmt(exact_per_site)}"))
    _write_text(cfg.out, "".join(lines))
    per_site = res.energy / (cfg.coupling * cfg.n_sites)
    print(
        f"ground n={cfg.n_sites} D={cfg.n_layers} m={cfg.sector} seed={cfg.seed}: "
        f"E/JN = {per_site:.6f} (exact {exact_per_site:.6f}), "
        f"fidelity = {res.fidelity:.6f}, norm = {res.norm:.6f}",
        file=sys.stderr,
    )
    return 0


def cmd_excited(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, "excited")
    workers = max(1, min(os.cpu_count() or 1, 4))
    res = run_excited(
        cfg.n_sites,
        cfg.n_layers,
        coupling=cfg.coupling,
        alpha=cfg.alpha,
        k_max=cfg.k_max,
        seed=cfg.seed,
        eps_reg=cfg.eps_reg,
        max_workers=workers,
    )
    model = HeisenbergRing(cfg.n_sites, cfg.coupling)
    ground_ref = lanczos_ground(model, sector=(0, 0))
    lines = ["q_index,q_over_pi,delta_e,exact_delta_e\n"]
    for row in res.rows:
        try:
            ref = lowest_in_spin_sector(model, row.m, s_z=1.0, total_spin=1.0)
            exact_delta = ref.energy - ground_ref.energy
        except LanczosError:
            exact_delta = float("nan")
        lines.append(
            f"{row.m},{_fmt(row.q_over_pi)},{_fmt(row.delta_e)},{_fmt(exact_delta)}\n"
        )
    lines.append(_meta_line(cfg))
    _write_text(cfg.out, "".join(lines))
    print(
        f"excited n={cfg.n_sites} D={cfg.n_layers}: ground E/JN = "
        f"{res.ground_energy / (cfg.coupling * cfg.n_sites):.6f}",
        file=sys.stderr,
    )
    return 0


def cmd_exact(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, "exact")
    model = HeisenbergRing(cfg.n_sites, cfg.coupling)
    s_z = args.sz
    sectors = momentum_sectors(cfg.n_sites) if args.all_sectors else None
    lines = ["q_index,s_z,energy_over_J,s_squared\n"]
    if sectors is None:
        res = lanczos_ground(model, sector=(cfg.sector, s_z))
        q_label = res.q_index if res.q_index is not None else ""
        lines.append(
            f"{q_label},{_fmt(res.s_z)},{_fmt(res.energy / cfg.coupling)},{_fmt(res.s_squared)}\n"
        )
    else:
        for sec in sectors:
            res = lanczos_ground(model, sector=(sec.m, s_z))
            lines.append(
                f"{sec.m},{_fmt(res.s_z)},{_fmt(res.energy / cfg.coupling)},"
                f"{_fmt(res.s_squared)}\n"
            )
    lines.append(_meta_line(cfg))
    _write_text(cfg.out, "".join(lines))
    return 0


def cmd_hadamard(args: argparse.Namespace) -> int:
    record, summary = hadamard.sample(args.samples, args.shots, args.seed)
    _write_text(args.out, hadamard.summary_table(record, summary))
    return 0


def cmd_compile_perm(args: argparse.Namespace) -> int:
    n = args.n_sites
    if args.perm is not None:
        perm = np.array([int(tok) for tok in args.perm.split(",")], dtype=np.intp)
        n = len(perm)
    elif args.translation is not None:
        if n is None:
            raise SystemExit("--translation requires --n-sites")
        perm = CyclicGroup(n).translation_perm(args.translation)
    elif args.long_swap is not None:
        if n is None:
            raise SystemExit("--long-swap requires --n-sites")
        perm = long_range_swap_perm(n, args.long_swap)
    else:
        raise SystemExit("one of --perm / --translation / --long-swap is required")
    net = amida_decompose(perm)
    _write_text(args.out, net.to_text())
    print(f"swaps={net.n_swaps} depth={net.depth}", file=sys.stderr)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    from .statevector import (
        Swap,
        apply_gate,
        dimer_state,
        eswap_amps,
        inner,
        swap_bit_index,
        verify_eswap_decomposition,
    )
    from .symmetry import MomentumSector, project
    from .statevector import StateVector

    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}{'  ' + detail if detail else ''}")
        failures += 0 if ok else 1

    thetas = list(np.linspace(0.0, 2.0 * np.pi, 18)) + [hadamard.THETA_1, hadamard.THETA_2]
    devs = [verify_eswap_decomposition(t)[1] for t in thetas]
    report(
        "eswap decomposition identity (20 angles)",
        max(devs) <= 1e-12,
        f"max dev {max(devs):.2e}",
    )

    counts_ok = True
    detail = []
    for r in (2, 4, 6, 8):
        net = amida_decompose(long_range_swap_perm(max(r + 2, 10), r))
        want_swaps, want_depth, _ = swap_count_bound(r)
        ok = net.n_swaps == want_swaps and net.depth == want_depth
        counts_ok &= ok
        detail.append(f"r={r}:{net.n_swaps}/{net.depth}")
    report("long-range swap network counts", counts_ok, " ".join(detail))

    rng = np.random.default_rng(11)
    group = CyclicGroup(8)
    sec = MomentumSector(8, 3)
    psi = StateVector(8, rng.standard_normal(256) + 1j * rng.standard_normal(256))
    once = project(psi, group, sec)
    twice = project(once, group, sec)
    dev = float(np.max(np.abs(once.amplitudes - twice.amplitudes)))
    report("projector idempotence (N=8)", dev <= 1e-12, f"dev {dev:.2e}")

    # singlet-pair algebra: sign flip, phase, recombination, superposition
    s01 = dimer_state(4, [(0, 1), (2, 3)])
    swapped = apply_gate(s01, Swap(0, 1))
    ok_sign = np.allclose(swapped.amplitudes, -s01.amplitudes, atol=1e-12)
    theta = 1.234
    phased = StateVector(4, eswap_amps(s01.amplitudes, swap_bit_index(4, 0, 1), theta))
    ok_phase = np.allclose(phased.amplitudes, np.exp(0.5j * theta) * s01.amplitudes, atol=1e-12)
    recombined = apply_gate(s01, Swap(1, 2))
    ok_recomb = np.allclose(
        recombined.amplitudes, dimer_state(4, [(0, 2), (1, 3)]).amplitudes, atol=1e-12
    )
    mixed = StateVector(4, eswap_amps(s01.amplitudes, swap_bit_index(4, 1, 2), theta))
    want = (
        np.cos(theta / 2) * s01.amplitudes
        - 1j * np.sin(theta / 2) * dimer_state(4, [(0, 2), (1, 3)]).amplitudes
    )
    ok_super = np.allclose(mixed.amplitudes, want, atol=1e-12)
    report(
        "singlet-pair gate algebra",
        ok_sign and ok_phase and ok_recomb and ok_super,
        f"sign={ok_sign} phase={ok_phase} recombine={ok_recomb} superpose={ok_super}",
    )

    print("verify:", "all checks passed" if failures == 0 else f"{failures} check(s) failed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symvqe",
        description="Momentum-projected exchange-gate VQE for the Heisenberg ring",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground", help="optimize the (projected) ground-state energy")
    _add_run_flags(p)
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("excited", help="triplet excitation energies over all momenta")
    _add_run_flags(p)
    p.set_defaults(func=cmd_excited)

    p = sub.add_parser("exact", help="Lanczos reference energies")
    _add_run_flags(p)
    p.add_argument("--sz", type=float, default=0.0, help="S_z sector (default 0)")
    p.add_argument("--all-sectors", action="store_true", help="scan every momentum index")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("hadamard", help="ancilla-test estimate of the 4-site energy")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hadamard)

    p = sub.add_parser("compile-perm", help="compile a permutation to adjacent swaps")
    p.add_argument("--n-sites", type=int, dest="n_sites")
    p.add_argument("--perm", help="comma-separated destinations, e.g. 1,2,3,0")
    p.add_argument("--translation", type=int, help="translation power n")
    p.add_argument("--long-swap", type=int, help="exchange sites 1 and r (0-based)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile_perm)

    p = sub.add_parser("verify", help="run the built-in identity checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
