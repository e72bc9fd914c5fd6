import sys

from oasis2.cli import main

sys.exit(main())
