#!/usr/bin/env python


import os.path
import sys

try:
    from core.cli.main import run_reduction
except ImportError as err:
    root = os.path.dirname(__file__)
    requirements_path = os.path.join(root, "requirements.txt")
    print(f"Python environment for reduction-core is not set up: module `{err.name}` is missing.", file=sys.stderr)
    print(f"Please run `{sys.executable} -m pip install -r {requirements_path}` and try again.", file=sys.stderr)
    sys.exit(255)

sys.exit(run_reduction())
