import sys

from qlg_burgers.cli import main

sys.exit(main())
