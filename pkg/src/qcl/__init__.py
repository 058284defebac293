"""Numerical laboratory for the qutrit family L_x = (1-x) id + x LS.

L_x(rho) = (1 - x) rho + (x/2)(Tr(rho) I - rho^T) walks from the identity
channel at x = 0 to the Landau-Streater (Werner-Holevo) channel at x = 1.
The subpackages compute its Kraus and Choi forms, complement, transfer
spectrum, classical and entanglement-assisted capacities, coherent
information lower bounds, the transpose-map SDP upper bound, and the
dense-coding protocols that are still available at x = 1.
"""

from . import capacities, channels, figures, ls_family, matcore, protocols, sdpbound, verify
from .capacities import CapacityPoint, c_ea, chi_star, coherent_info, min_output_entropy, q1_lower
from .channels import ChoiMatrix, KrausChannel, kraus_channel
from .errors import QclError
from .ls_family import apply_closed, complement_closed, kraus_for, spectrum
from .protocols import ProtocolResult, bell_protocol, mutual_information, phase_protocol
from .sdpbound import SdpProblem, SdpSolution, q_flag, q_gamma

__version__ = "0.1.0"

__all__ = [
    "CapacityPoint",
    "ChoiMatrix",
    "KrausChannel",
    "ProtocolResult",
    "QclError",
    "SdpProblem",
    "SdpSolution",
    "apply_closed",
    "bell_protocol",
    "c_ea",
    "capacities",
    "channels",
    "chi_star",
    "coherent_info",
    "complement_closed",
    "figures",
    "kraus_channel",
    "kraus_for",
    "ls_family",
    "matcore",
    "min_output_entropy",
    "mutual_information",
    "phase_protocol",
    "protocols",
    "q1_lower",
    "q_flag",
    "q_gamma",
    "sdpbound",
    "spectrum",
    "verify",
    "__version__",
]
