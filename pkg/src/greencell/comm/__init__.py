"""Communication cooperation: offloading, spectrum sharing and CoMP."""

from .comp import (AggregateTerm, CompAllocation, PiecewiseLinearCost, comp_plan,
                   grid_price_model, optimize_comp, solve_comp)
from .offload import Association, optimize_offloading
from .spectrum import (SpectrumPartition, optimize_spectrum_sharing, partition,
                       spectrum_demand)

__all__ = [
    "AggregateTerm", "Association", "CompAllocation", "PiecewiseLinearCost",
    "SpectrumPartition", "comp_plan", "grid_price_model", "optimize_comp",
    "optimize_offloading", "optimize_spectrum_sharing", "partition",
    "solve_comp", "spectrum_demand",
]
