__version__ = "0.3.0"

import logging

_logger = logging.getLogger(__name__)

from . import complexity as complexity
from . import gadgets as gadgets
from . import generate as generate
from . import io_formats as io_formats
from . import reduce_hex as reduce_hex
from . import reduce_sq as reduce_sq
from . import sat as sat
from . import solver as solver
from . import trvb as trvb
from .errors import *
from .grid_graph import (
    ClassificationReport,
    GridGraph,
    build,
    classify,
    faces,
    pixel_graph,
    region_boundary,
)
from .ham_core import (
    CycleCertificate,
    HamResult,
    LocalSolutionSpec,
    enumerate_local_solutions,
    find_hamiltonian,
    verify_cycle,
)
from .lattice import Cell, Coord, GridKind
from .solver import solve
from .thin_poly import solve_hex, solve_square, solve_triangular
from .utils import *
