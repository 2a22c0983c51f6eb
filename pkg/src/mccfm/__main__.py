import sys

from mccfm.cli import main

sys.exit(main())
