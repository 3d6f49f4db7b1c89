from __future__ import absolute_import

from .logger import configure_logging
configure_logging()

from .potts import PottsAF
from .models import *
from .utils import *
import importlib as _importlib
logger = _importlib.import_module('.logger', __name__)  # rebind the submodule shadowed by utils.logger
contour = _importlib.import_module('.contour', __name__)  # rebind the submodule shadowed by models.contour
from .errors import (PottsError, ValidationError, ParseError, CapExceededError, MergeError, NonConvergentError,
                     ZeroProbabilityError, InvariantViolation, AcceptanceFailure)

from .version import __version__, __schema_version__
