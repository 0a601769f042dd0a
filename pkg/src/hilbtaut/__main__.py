import sys

from hilbtaut.cli import main

sys.exit(main())
