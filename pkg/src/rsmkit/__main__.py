"""Allow ``python -m rsmkit`` as an alias for the ``rsmkit`` script."""

import sys

from .cli import main

sys.exit(main())
