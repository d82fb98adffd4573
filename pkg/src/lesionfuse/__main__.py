import sys

from lesionfuse.cli import main

sys.exit(main())
