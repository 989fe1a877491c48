"""Figure regeneration from symvqe CSV outputs."""

from .figures import (
    FigureSpec,
    load_excitation_csv,
    load_trace_csv,
    plot_energy,
    plot_excitation,
    plot_fidelity,
)

__version__ = "0.1.0"
