from pycartier.cartier import CartierAlgebra, CartierOp  # noqa: F401
from pycartier.fpure import cplus, fpure_witness, is_fpure, is_nilpotent, underline  # noqa: F401
from pycartier.ideals import Ideal, RingCtx  # noqa: F401
from pycartier.jumping import fpt, jumps_in_range, tau_t  # noqa: F401
from pycartier.logger import LogHandler, LogLevel  # noqa: F401
from pycartier.polyring import format_poly, parse_poly  # noqa: F401
from pycartier.testideal import closure, skoda_check, tau, tau_nonreduced  # noqa: F401
from pycartier.version import version  # noqa: F401
