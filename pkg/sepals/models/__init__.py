from .direction import *
from .dataset import *
from .fit import *
from .prior import *
from .sim_config import *
from .sweep import *
from .manifest import *
