#!/usr/bin/env python3
"""
Startup script for the Marcum Q log-concavity toolkit
"""

import sys


def check_dependencies():
    """Check if required dependencies are installed"""
    required_packages = ['numpy', 'scipy', 'click']
    missing_packages = []

    for package in required_packages:
        try:
            __import__(package)
        except ImportError:
            missing_packages.append(package)

    if missing_packages:
        print("❌ Missing required packages:", file=sys.stderr)
        for package in missing_packages:
            print(f"   - {package}", file=sys.stderr)
        print("\n📦 Install dependencies with:", file=sys.stderr)
        print("   pip install -r requirements.txt", file=sys.stderr)
        return False

    return True


def main():
    """Check the environment, then hand the arguments to the cli"""
    if not check_dependencies():
        sys.exit(1)

    from cli import cli
    cli(prog_name='run.py')


if __name__ == '__main__':
    main()
