from .objective import (BOUNDS, OBSERVABLES, PARAM_NAMES, REVIEW_GATE, CalibrationSettings, CalibrationTarget,
                        ParameterSet, apply_params, fit, load_targets, objective, params_fragment,
                        passes_review_gate, score, simulate_observables)
from .simplex import SimplexResult, nelder_mead
