from .forced_return import ForcedReturnController, ForcedReturnPolicy, forced_return_step
from .schedule import (LOOPS, PowerSchedule, Segment, alternating_schedule, cyclic_schedule, power_at,
                       schedule_energy, schedule_from_cfg, step_schedule)
