import sys

from mbqcflow.cli import main

sys.exit(main())
