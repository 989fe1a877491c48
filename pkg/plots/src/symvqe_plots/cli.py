"""Entry points: plot-fig4 (fidelity), plot-fig5 (energy), plot-fig6 (dispersion)."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, plot_energy, plot_excitation, plot_fidelity


def _parser(description: str, with_exact: bool = False) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("csv", nargs="+", help="input CSV file(s)")
    p.add_argument("-o", "--out", required=True, help="output image path")
    p.add_argument("--label", action="append", default=None, help="one per CSV")
    if with_exact:
        p.add_argument(
            "--exact", type=float, default=None,
            help="exact energy per site for the baseline (overrides CSV metadata)",
        )
    return p


def _run(plot_fn, args, **extra) -> int:
    spec = FigureSpec(
        csv_paths=args.csv,
        labels=args.label or [],
        out_path=args.out,
        **extra,
    )
    try:
        plot_fn(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(args.out)
    return 0


def main_fidelity(argv=None) -> int:
    args = _parser("fidelity vs iteration (semi-log)").parse_args(argv)
    return _run(plot_fidelity, args)


def main_energy(argv=None) -> int:
    args = _parser("energy per site vs iteration with exact baseline", with_exact=True).parse_args(argv)
    return _run(plot_energy, args, exact_energy_per_site=args.exact)


def main_excitation(argv=None) -> int:
    args = _parser("triplet gap vs momentum with exact markers").parse_args(argv)
    return _run(plot_excitation, args)
