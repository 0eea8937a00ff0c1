import sys

from compopt.main import main

sys.exit(main())
