import sys

from minctrl.cli import main

sys.exit(main())
