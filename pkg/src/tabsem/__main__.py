import sys

from tabsem.cli import main

sys.exit(main())
