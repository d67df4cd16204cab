#
# See COPYRIGHT file at the top of the source tree
#

from .exceptions import *
from .utilities import *
from .alphabet import *
from .polyboxCode import *
from .measure import *
from .classifiers import *
from .cliqueSearch import *
from .keller import *
from .coverEnumeration import *
from .siblings import *
from .rigidity import *
from .codeEnumeration import *
from .tiling import *
from .codeIo import *
from .version import *
