from dataclasses import dataclass, replace

import numpy as np

from ..utils.exceptions import SpecError


@dataclass(frozen=True)
class Material:
    """Thermophysical and mechanical property record, SI units.

    alpha_eff is the thermal expansion minus the hygro-shrinkage of the
    material, so it may be negative (paper shrinks when heated).
    """
    name: str
    k: float
    rho: float
    cp: float
    E: float
    alpha_eff: float
    thickness: float

    @property
    def areal_heat_capacity(self):
        """rho * cp * t, J m^-2 K^-1."""
        return self.rho * self.cp * self.thickness

    def with_thickness(self, thickness):
        return replace(self, thickness=thickness)


def check_material(material, field='materials'):
    for key in ('k', 'rho', 'cp', 'E', 'thickness'):
        value = getattr(material, key)
        if not np.isfinite(value) or value <= 0:
            raise SpecError('%s must be > 0, got %r' % (key, value),
                            field='%s.%s.%s' % (field, material.name, key), kind='dimension')
    if not np.isfinite(material.alpha_eff):
        raise SpecError('alpha_eff must be finite', field='%s.%s.alpha_eff' % (field, material.name),
                        kind='range')
    return material


def material_from_cfg(name, mat_cfg):
    material = Material(
        name=name,
        k=float(mat_cfg['k']),
        rho=float(mat_cfg['rho']),
        cp=float(mat_cfg['cp']),
        E=float(mat_cfg['E']),
        alpha_eff=float(mat_cfg['alpha_eff']),
        thickness=float(mat_cfg['thickness_um']) * 1e-6,
    )
    return check_material(material)


def stack_heat_capacity(layers):
    return float(sum(m.areal_heat_capacity for m in layers))
