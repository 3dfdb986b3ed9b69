"""Run the full HeLP check on every shipped group and print a summary table.

    python scripts/run_all_groups.py
"""

import time

from torsionhelp import help_core as hc
from torsionhelp.group_data import SHIPPED_GROUPS, load_shipped, validate


def main() -> None:
    print(f"{'group':6} {'|G|':>5} {'ZP1':>13} {'SpP':>9} {'PGQ':>9} {'critical':>10} {'time':>7}")
    for name in SHIPPED_GROUPS:
        t = load_shipped(name)
        if validate(t):
            print(f"{name:6} invalid table")
            continue
        t0 = time.perf_counter()
        v = hc.verdicts(hc.solve_all(t), t)
        dt = time.perf_counter() - t0
        crit = ",".join(map(str, v.critical_orders)) or "-"
        print(f"{name:6} {t.group_order:>5} {v.zp1:>13} {v.spp:>9} {v.pgq:>9} {crit:>10} {dt:>6.2f}s")


if __name__ == "__main__":
    main()
