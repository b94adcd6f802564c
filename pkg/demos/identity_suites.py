"""Run the identity suites and print the worst case of each kind."""

from collections import defaultdict

from weylscope.verifysuite import run_j_suite, run_table_suite, run_weyl_suite


def summarize(name, cases):
    groups = defaultdict(list)
    for c in cases:
        groups[c.identity].append(c)
    for ident, cs in sorted(groups.items()):
        worst = max(cs, key=lambda c: c.error)
        status = "all pass" if all(c.passed for c in cs) else f"{sum(not c.passed for c in cs)} fail"
        print(f"{name:6s} {ident:16s} {len(cs):4d} cases  {status:9s} worst {worst.error:.1e} at {worst.params}")


if __name__ == "__main__":
    summarize("J", run_j_suite())
    summarize("Weyl", run_weyl_suite())
    summarize("tables", run_table_suite())
