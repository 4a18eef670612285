"""
LCM Tool - command-line entry point
Run `python lcm_tool.py --help` for the list of subcommands
"""
import sys

from lcm_indist.errors import ConfigurationError

try:
    from lcm_indist.cli import main
except ConfigurationError as e:
    # settings are read from the environment on import
    print(f"❌ error: {e}", file=sys.stderr)
    sys.exit(2)

if __name__ == "__main__":
    main()
