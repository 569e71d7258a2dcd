"""Figure rendering for sweep output directories."""

__version__ = "0.1.0"

from .figures import FigureSpec, PlotInputError, plot_all, plot_series

__all__ = ["FigureSpec", "PlotInputError", "plot_all", "plot_series"]
