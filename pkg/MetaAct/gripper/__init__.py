from .grasp import GRASP_MODES, ObjectSpec, grasp_mode, object_from_cfg
from .jaw import (GripperSpec, JawTrajectory, gripper_from_cfg, jaw_center, jaw_opening, jaw_range,
                  outward_deflection)
