#!/usr/bin/env python3
"""
Main Entry Point for the Qutrit Distillation Toolkit

Usage:
    python main.py wigner --named norrell
    python main.py threshold --code edge --target fourier
    python main.py scan --plane xz --resolution 101
    python main.py search --seed 7 --candidates 200
    python main.py verify [--fast]
    python main.py report [--resolution 41] [--seed 0]

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error.
The optional THREADS environment variable caps scan and search parallelism.
"""

import os
import sys

# Import modules from our package
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from qutrit_msd.src.cli import main

if __name__ == "__main__":
    sys.exit(main())
