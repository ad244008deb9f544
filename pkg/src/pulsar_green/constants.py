"""Physical constants in CGS units (CODATA 2018)."""

K_BOLTZMANN = 1.380649e-16  # erg / K
C_LIGHT = 2.99792458e10  # cm / s
M_ELECTRON = 9.1093837015e-28  # g
M_PROTON = 1.67262192369e-24  # g
SIGMA_THOMSON = 6.6524587321e-25  # cm^2
KEV = 1.602176634e-9  # erg
ME_C2 = M_ELECTRON * C_LIGHT**2  # erg
