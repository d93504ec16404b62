# pylint: skip-file
# Standard Library
import sys
import unittest

if __name__ == "__main__":
    # runtests.py <package> [-v N]
    package = sys.argv[1] if len(sys.argv) > 1 and not sys.argv[1].startswith("-") else "sitemix"
    verbosity = 1
    if "-v" in sys.argv:
        verbosity = int(sys.argv[sys.argv.index("-v") + 1])

    suite = unittest.defaultTestLoader.discover(package, top_level_dir=".")
    result = unittest.TextTestRunner(verbosity=verbosity).run(suite)
    sys.exit(not result.wasSuccessful())
