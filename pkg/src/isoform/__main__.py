import sys

from isoform.cli import main

sys.exit(main())
