"""Internal unit system: energies and hbar-rates in eV, lengths in nm, dipole
moments in Debye.  Every module converts on entry and exposes eV/nm/D surfaces
only; second/femtosecond conversions go through HBAR_EV_S / HBAR_EV_FS.
"""

import math

HBAR_C_EV_NM = 197.3269804        # hbar*c
HBAR_EV_S = 6.582119569e-16       # hbar
HBAR_EV_FS = 0.6582119569         # hbar, femtosecond flavour
DEBYE_E_NM = 0.0208194            # 1 Debye in e*nm
COULOMB_EV_NM = 1.4399645         # e^2/(4 pi eps0)

# d^2/eps0 for a 1 Debye dipole, in eV*nm^3 (4*pi folded in)
DIPOLE_SQ_OVER_EPS0 = 4.0 * math.pi * DEBYE_E_NM**2 * COULOMB_EV_NM
