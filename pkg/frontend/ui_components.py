"""
Console UI pieces shared by the command line and the benchmark scripts:
ANSI colours, a timestamped run logger, banners and fixed-width tables.
"""

import time
from collections import deque

# ANSI Colors
COLOR_GREEN = '\033[92m'
COLOR_YELLOW = '\033[93m'
COLOR_RED = '\033[91m'
COLOR_CYAN = '\033[96m'
RESET = '\033[0m'

RULE_WIDTH = 60


class RunLogger:
    """Tracks progress lines of a long run, printing each with a timestamp"""
    def __init__(self, quiet=False, max_logs=50):
        self.logs = deque(maxlen=max_logs)
        self.quiet = quiet

    def add_log(self, message):
        """Add a log message with timestamp"""
        line = f"[{time.strftime('%H:%M:%S')}] {message}"
        self.logs.append(line)
        if not self.quiet:
            print(line, flush=True)

    def banner(self, title):
        if not self.quiet:
            print(f"\n{'=' * RULE_WIDTH}")
            print(title)
            print(f"{'=' * RULE_WIDTH}")


def status_text(passed, color=True, known=False):
    """PASS / FAIL, or KNOWN for a check whose reference value is a documented discrepancy."""
    if known:
        text, tint = "KNOWN", COLOR_YELLOW
    else:
        text, tint = ("PASS", COLOR_GREEN) if passed else ("FAIL", COLOR_RED)
    if not color:
        return text
    return f"{tint}{text}{RESET}"


def format_table(header, rows):
    """
    Render rows as a fixed-width text table.

    :param header: column titles
    :param rows: sequences of cells (converted with str)
    """
    cells = [[str(c) for c in row] for row in rows]
    widths = [len(h) for h in header]
    for row in cells:
        for i, c in enumerate(row):
            widths[i] = max(widths[i], len(c))

    def line(values):
        return "  ".join(v.ljust(w) for v, w in zip(values, widths)).rstrip()

    out = [line(header), "-" * (sum(widths) + 2 * (len(widths) - 1))]
    out.extend(line(row) for row in cells)
    return "\n".join(out)
