"""The three noise channels acting on a single input state.

Shows the excited-state population of the calibrated qubits, the branch
probabilities of thermal relaxation over one two-qubit gate, and the
crosstalk phase picked up by |11>.
"""

import numpy as np

from varqft import build_thermal_params, load_calibration, thermal_probs
from varqft.channels import crosstalk_unitary, depolarize
from varqft.states import purity, to_density

for rec in load_calibration():
    tp = thermal_probs(build_thermal_params(rec, 660))
    print(f"qubit {rec.qubit_id}: p_e={build_thermal_params(rec, 660).p_excited:.3e}  "
          f"p_reset={tp.p_reset:.3e}  p_z={tp.p_z:+.3e}")
# qubit 3 has T2 > T1, so the dephasing weight comes out negative; the map is
# still a valid channel and is built from its Choi matrix instead.

plus = to_density(np.full(4, 0.5))
print(f"\npurity after 2q depolarizing (eps=0.1): {purity(depolarize(plus, 0.1)):.4f}")
u = crosstalk_unitary(1.5e5, 660e-9)
print(f"crosstalk phase on |11>: {np.angle(u[3, 3]):+.5f} rad")
