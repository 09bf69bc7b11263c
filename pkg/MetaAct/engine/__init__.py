from .observables import (COLUMNS, cycle_peak_to_peak, linear_r2, normalize_displacement, rise_time,
                          saturation_value, sensitivity_fit, time_to_fraction, to_frame, value_at)
from .presets import PresetRun, preset
from .presets import __all__ as PRESETS
from .scenario import ScenarioConfig, TimeSeriesRecord, build_scenario, final_shape, run_scenario, run_steady
