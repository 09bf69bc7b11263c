from pathlib import Path

CONFIG_DIR = Path(__file__).resolve().parent / 'configs'
DEFAULT_CONFIG = CONFIG_DIR / 'defaults.yaml'
DEFAULT_TARGETS = CONFIG_DIR / 'targets.csv'

# sections whose records may be added by name
OPEN_SECTIONS = ('materials',)

CSV_HEADER = ('t_s', 'dT_outer_K', 'dT_inner_K', 'tip_disp_mm', 'ref_disp_mm', 'kappa_fit_per_cm',
              'P_outer_W', 'P_inner_W')
CSV_DIGITS = 9

MANIFEST_NAME = 'manifest.yaml'
