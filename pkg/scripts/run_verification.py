"""Run the verification registry and write the structured report.

Report blocks go to stdout (or --out) so they can be diffed against golden
files; the human summary goes to stderr.  Exit status 0 means no check
failed (skipped checks do not fail the run).
"""

import argparse
import sys
import time

from galdual.verifier import all_passed, format_reports, run_all


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--profile", choices=("quick", "full"), default="full")
    parser.add_argument("--out", default=None, help="write the report here")
    args = parser.parse_args()

    started = time.monotonic()
    reports = run_all(args.profile)
    elapsed = time.monotonic() - started

    text = format_reports(reports)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    tally = {"pass": 0, "fail": 0, "skipped": 0}
    for report in reports:
        tally[report.status] += 1
    print(
        f"{args.profile}: {tally['pass']} pass, {tally['fail']} fail, "
        f"{tally['skipped']} skipped in {elapsed:.1f}s",
        file=sys.stderr,
    )
    return 0 if all_passed(reports) else 1


if __name__ == "__main__":
    sys.exit(main())
