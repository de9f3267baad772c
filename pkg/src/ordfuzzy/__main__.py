import sys

from ordfuzzy.cli import main

sys.exit(main())
