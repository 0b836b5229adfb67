"""A seeded Monte-Carlo batch, written as CSV.

Runs the same configuration the command line would run with
``streamvote experiment`` and prints the summary.  Rerunning gives a
byte-identical file.
"""

import sys

from streamvote.experiment import ExperimentConfig, run_experiment, write_csv

config = ExperimentConfig(rule="borda-cc", generator="impartial-borda", n=5_000, m=5, k=2, eps=0.3, trials=10)
summary = run_experiment(config)
write_csv(summary, sys.stdout)
print(f"\nsuccess rate {summary.success_rate:.2f}, mean peak storage {summary.mean_peak_stored:.0f} votes",
      file=sys.stderr)
