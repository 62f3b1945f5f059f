"""Physical constants in atomic units (hbar = e = m_e = 4 pi eps0 = 1)."""

FINE_STRUCTURE = 7.2973525693e-3

# CODATA 2018
HARTREE_J = 4.3597447222071e-18
HARTREE_HZ = 6.579683920502e15
BOHR_M = 5.29177210903e-11

DEFAULT_LAMB_SHIFT_GHZ = 1.0


def speed_of_light(alpha=FINE_STRUCTURE):
    return 1.0 / alpha


def ghz_to_hartree(ghz):
    return ghz * 1e9 / HARTREE_HZ
