import sys

from specres.cli import main

sys.exit(main())
