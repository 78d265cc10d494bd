import sys

from quaperture.cli.main import main

sys.exit(main())
