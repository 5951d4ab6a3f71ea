#!/usr/bin/env python3
"""
HySim Inpainting Main Execution
Runs the command line front door straight from a source checkout.
"""

import sys
from pathlib import Path

# Add src directory to path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from hysim_inpaint.cli import main


if __name__ == "__main__":
    sys.exit(main())
