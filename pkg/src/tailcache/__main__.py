import sys

from tailcache.cli import main

sys.exit(main())
