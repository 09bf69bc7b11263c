from .diagnostics import (biot_number, crosstalk_ratio, explicit_stability_limit, heater_mean_temp,
                          heater_mean_temps, loop_crosstalk, lumped_saturation, out_of_plane_ratio,
                          thermal_time_constant)
from .solver import HeatNetwork, ThermalParams, ThermalSolver, ThermalState, get_solver, steady_state, step_thermal
