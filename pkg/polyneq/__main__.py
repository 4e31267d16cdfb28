import sys

from polyneq.cli import main

sys.exit(main())
