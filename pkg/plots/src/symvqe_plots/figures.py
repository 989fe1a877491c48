"""Static figure analogues built from optimizer trace and dispersion CSVs.

Input formats (produced by the symvqe CLI):

* trace CSV: header ``k,energy_per_site,norm,fidelity,grad_norm``, one row
  per iteration, optional trailing ``# config_hash=... version=...``
  comment that may carry ``exact_energy_per_site=<float>``.
* excitation CSV: header ``q_index,q_over_pi,delta_e,exact_delta_e``.

Styling convention: filled markers for symmetrized series, empty markers
for non-symmetrized ones (series whose label contains "bare" or
"non-sym"); the exact baseline is a horizontal line, exact dispersion
points are star markers.  Outputs are deterministic: fixed style, no
timestamps embedded in the image metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_MARKERS = ("o", "s", "^", "D", "v", "P")


@dataclass
class TraceData:
    k: np.ndarray
    energy_per_site: np.ndarray
    norm: np.ndarray
    fidelity: np.ndarray
    grad_norm: np.ndarray
    exact_energy_per_site: float | None = None


@dataclass
class ExcitationData:
    q_index: np.ndarray
    q_over_pi: np.ndarray
    delta_e: np.ndarray
    exact_delta_e: np.ndarray | None = None


@dataclass
class FigureSpec:
    """Input CSVs, one label per CSV, and the output image path."""

    csv_paths: list
    labels: list = field(default_factory=list)
    out_path: str = "figure.png"
    log_y: bool = False
    exact_energy_per_site: float | None = None

    def __post_init__(self) -> None:
        if not self.csv_paths:
            raise ValueError("at least one input CSV is required")
        if self.labels and len(self.labels) != len(self.csv_paths):
            raise ValueError("need exactly one label per input CSV")
        if not self.labels:
            self.labels = [f"series {k + 1}" for k in range(len(self.csv_paths))]


TRACE_HEADER = "k,energy_per_site,norm,fidelity,grad_norm"
EXCITATION_HEADER = "q_index,q_over_pi,delta_e,exact_delta_e"


def _read_rows(path: str, expected_header: str) -> tuple[list, dict]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].strip()
    if header != expected_header:
        raise ValueError(
            f"{path}: header {header!r} does not match expected {expected_header!r}"
        )
    meta: dict = {}
    rows = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            for token in ln[1:].split():
                if "=" in token:
                    key, val = token.split("=", 1)
                    meta[key] = val
            continue
        rows.append(ln.split(","))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows, meta


def load_trace_csv(path: str) -> TraceData:
    rows, meta = _read_rows(path, TRACE_HEADER)
    cols = np.array([[float(v) for v in row] for row in rows]).T
    exact = meta.get("exact_energy_per_site")
    return TraceData(
        k=cols[0].astype(int),
        energy_per_site=cols[1],
        norm=cols[2],
        fidelity=cols[3],
        grad_norm=cols[4],
        exact_energy_per_site=float(exact) if exact is not None else None,
    )


def load_excitation_csv(path: str) -> ExcitationData:
    rows, _ = _read_rows(path, EXCITATION_HEADER)
    cols = np.array([[float(v) for v in row] for row in rows]).T
    return ExcitationData(
        q_index=cols[0].astype(int),
        q_over_pi=cols[1],
        delta_e=cols[2],
        exact_delta_e=cols[3] if len(cols) > 3 else None,
    )


def _is_bare(label: str) -> bool:
    lowered = label.lower()
    return "bare" in lowered or "non-sym" in lowered or "nonsym" in lowered


def _marker_style(index: int, label: str) -> dict:
    marker = _MARKERS[index % len(_MARKERS)]
    if _is_bare(label):
        return dict(marker=marker, markerfacecolor="none", markevery=0.08)
    return dict(marker=marker, markevery=0.08)


def plot_fidelity(spec: FigureSpec) -> str:
    """Fidelity against iteration count, one curve per trace CSV."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for idx, (path, label) in enumerate(zip(spec.csv_paths, spec.labels)):
        trace = load_trace_csv(path)
        ax.semilogy(trace.k, trace.fidelity, label=label, **_marker_style(idx, label))
    ax.set_xlabel("iteration k")
    ax.set_ylabel("fidelity")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return spec.out_path


def plot_energy(spec: FigureSpec) -> str:
    """Energy per site against iteration, with the exact baseline.

    The baseline value comes from the spec when given, otherwise from the
    first CSV that carries ``exact_energy_per_site`` metadata.
    """
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    baseline = spec.exact_energy_per_site
    for idx, (path, label) in enumerate(zip(spec.csv_paths, spec.labels)):
        trace = load_trace_csv(path)
        if baseline is None and trace.exact_energy_per_site is not None:
            baseline = trace.exact_energy_per_site
        plot = ax.semilogx if spec.log_y else ax.plot
        plot(trace.k, trace.energy_per_site, label=label, **_marker_style(idx, label))
    if baseline is None:
        plt.close(fig)
        raise ValueError(
            "no exact baseline: pass exact_energy_per_site or use a trace CSV "
            "with exact_energy_per_site metadata"
        )
    ax.axhline(baseline, color="black", linewidth=0.9, linestyle="--", label="exact")
    ax.set_xlabel("iteration k")
    ax.set_ylabel("E / JN")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return spec.out_path


def plot_excitation(spec: FigureSpec) -> str:
    """Triplet gap against momentum with exact markers overlaid."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    exact_drawn = False
    for idx, (path, label) in enumerate(zip(spec.csv_paths, spec.labels)):
        data = load_excitation_csv(path)
        order = np.argsort(data.q_over_pi)
        ax.plot(
            data.q_over_pi[order],
            data.delta_e[order],
            label=label,
            linestyle="-",
            **_marker_style(idx, label),
        )
        if data.exact_delta_e is not None and not exact_drawn:
            ax.plot(
                data.q_over_pi[order],
                data.exact_delta_e[order],
                "k*",
                markersize=9,
                linestyle="none",
                label="exact",
            )
            exact_drawn = True
    ax.set_xlabel("q / pi")
    ax.set_ylabel("dE / J")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return spec.out_path
