from .version import __version__
from .errors import *
from .model import *
from .solver import *
from .oracle import *
from .datagen import *
from .dataio import *
from .interfaces import *
from .experiment import *
from .callbacks import *
from .utils import *
from .config import *
