# Standard Library
import sys

# sitemix
from sitemix.cli import main

sys.exit(main())
