#!/usr/bin/env python3
"""Invariant server answering with the derived Jones invariant.

Modes (first argument):
    serve       answer every request
    malformed   answer every request with a line that is not JSON
    fractional  answer every request with a polynomial whose coefficient is 1.5
    exit        exit with status 3 on the first request
    alternate   answer one request, exit on the next
    silent      read requests and never answer
"""

import sys
import time

from skein_integrator.diagram import SingularDiagram
from skein_integrator.invariants.singular_invariants import DerivedInvariant


def emit(line: str) -> None:
    sys.stdout.write(line + "\n")
    sys.stdout.flush()


def main() -> None:
    mode = sys.argv[1] if len(sys.argv) > 1 else "serve"
    invariant = DerivedInvariant()
    answered = 0
    while True:
        line = sys.stdin.readline()
        if not line:
            return
        if not line.strip():
            continue
        if mode == "exit" or (mode == "alternate" and answered == 1):
            sys.exit(3)
        if mode == "silent":
            time.sleep(60)
            continue
        if mode == "malformed":
            emit("not a polynomial")
            continue
        if mode == "fractional":
            emit('{"var": "A", "terms": [[0, 1.5]]}')
            continue
        diagram = SingularDiagram.model_validate_json(line)
        emit(invariant.evaluate(diagram).model_dump_json())
        answered += 1


if __name__ == "__main__":
    main()
