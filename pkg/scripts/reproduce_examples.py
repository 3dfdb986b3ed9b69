"""Print the three worked examples (S3 lattice, S3 unit, A5 order 5) in turn."""

import sys

from torsionhelp.cli import EXAMPLES, run_example


def main() -> int:
    worst = 0
    for name in EXAMPLES:
        _, lines, code = run_example(name)
        print(f"== {name}")
        print("\n".join(lines))
        print()
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
