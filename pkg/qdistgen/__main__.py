import sys

from qdistgen.main import main

sys.exit(main())
