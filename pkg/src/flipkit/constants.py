"""Physical constants used across the package.

Values are CODATA 2018, truncated to 9 significant digits so that every
result is reproducible without pulling in a constants package.  All
quantities are SI.
"""

# speed of light in vacuum (m/s), exact
C_LIGHT = 299792458.0

# vacuum permeability (H/m) and permittivity (F/m)
MU_0 = 1.25663706e-06
EPS_0 = 8.85418781e-12

# elementary charge (C) and Planck constant (J s)
E_CHARGE = 1.60217663e-19
PLANCK_H = 6.62607015e-34

# magnetic flux quantum h / 2e (Wb)
PHI_0 = 2.06783385e-15
