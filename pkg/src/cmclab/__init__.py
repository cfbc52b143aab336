"""cmclab: constant-mean-curvature graphs in Schwarzschild near null infinity and the horizon."""

__version__ = "0.1.0"
