#!/usr/bin/env python3
"""
Main entry point for running the xmoncoupler command line.
"""

import sys

from dotenv import load_dotenv

# Load environment variables first
load_dotenv()

from xmoncoupler.cli import main

if __name__ == '__main__':
    sys.exit(main())
