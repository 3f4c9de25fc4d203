import sys

from mfmod.cli import main

sys.exit(main())
