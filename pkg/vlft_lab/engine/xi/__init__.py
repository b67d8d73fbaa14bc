from vlft_lab.engine.xi.bsc_rcu import log_multiplier, xi_bsc, xi_bsc_log
from vlft_lab.engine.xi.dt_lattice import DensityLattice, xi_dt_dmc
from vlft_lab.engine.xi.oracle import xi_exact_oracle
from vlft_lab.engine.xi.series import XiSeries, default_xi_method, xi_series_get

__all__ = [
    "DensityLattice",
    "XiSeries",
    "default_xi_method",
    "log_multiplier",
    "xi_bsc",
    "xi_bsc_log",
    "xi_dt_dmc",
    "xi_exact_oracle",
    "xi_series_get",
]
