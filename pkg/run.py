#!/usr/bin/env python3
"""
Script de entrada del benchmark MCTS-GA
"""
import sys

from backend.cli import main

if __name__ == "__main__":
    sys.exit(main())
