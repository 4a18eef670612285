"""
Regenerate the path-family results and print PASS/FAIL per check
Usage: python verify_theorems.py [n_max]   (default 8)
"""
import sys

from lcm_indist.analysis.theorems import verify_theorems
from lcm_indist.errors import LCMError

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 8

print("=" * 80)
print(f"VERIFYING PATH-FAMILY RESULTS UP TO n={n_max}")
print("=" * 80)

try:
    report = verify_theorems(n_max)
except LCMError as e:
    print(f"❌ {e}")
    sys.exit(2)

for line in report.render():
    print(line)

sys.exit(0 if report.passed else 1)
