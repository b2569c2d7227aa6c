#!/usr/bin/env python3
"""
Command-line runner for emforge

Examples:
    python run_cli.py pi --group "Z/2" --n 2 --qmax 4
    python run_cli.py verify cyclic --construction ka2 --group "Z/3" --qmax 5
    python run_cli.py cohomology group --g "Z/2" --coeff "Z/2" --nmax 5 --oracle
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli.commands import main  # noqa: E402

if __name__ == '__main__':
    sys.exit(main())
