#!/usr/bin/env python3
"""
qjsf entry point.

Usage:
    python qjsf.py sigma --mu 1,1 --nu 1 --q 1/3
    python qjsf.py verify --suite all
"""

from cli.main import main


if __name__ == "__main__":
    main()
