"""
main.py
GradePipe command-line entry point
"""

import sys

from harness.cli import cli_main


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
