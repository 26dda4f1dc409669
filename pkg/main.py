#!/usr/bin/env python3
"""Main entry point for markoff-systoles computations and verification suites"""

import os
import sys
import logging
from dotenv import load_dotenv

from markoff_systoles.cli import run

load_dotenv()
logging.basicConfig(level=os.getenv("MARKOFF_LOG_LEVEL", "INFO").upper())

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
