#!/usr/bin/env python3
"""
Corpus runner.

Prints the reduced HOMFLY-PT table of every catalog braid together with the
Euler check against the skein oracle.
"""
import asyncio
import sys

from agents.verification.euler_check import EulerCheckAgent, EulerCheckInput
from apps.cli.render import render_table
from homology.iterated import compute_homfly_async
from knots.catalog import lookup, names
from knots.skein_oracle import homfly
from services.observability import observability_service


async def run_corpus() -> int:
    """Compute every catalog entry; returns the number of failed checks."""
    agent = EulerCheckAgent()
    failures = 0
    for name in names():
        word = lookup(name)
        observability_service.log_info(f"Corpus entry {name}: {word}")
        computation = await compute_homfly_async(word)
        outcome = await agent.run(EulerCheckInput(computation.table, homfly(word)))
        failures += not outcome.passed
        print(render_table(computation.table, f"{name}  {word}"))
        print(f"euler: {'MATCH' if outcome.passed else 'MISMATCH'}\n")
    return failures


if __name__ == "__main__":
    sys.exit(1 if asyncio.run(run_corpus()) else 0)
