"""Write the reference fixtures as importable files: python -m oiebench.fixtures OUTDIR"""

import sys

from . import write_fixture_files

if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "fixture-files"
    for path in write_fixture_files(target):
        print(path)
