import sys

from sepals.main import main

sys.exit(main())
