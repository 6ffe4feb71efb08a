import sys

from katugampola.cli import main

sys.exit(main())
