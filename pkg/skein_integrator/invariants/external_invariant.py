"""Singular invariant computed by a child process.

The child reads one diagram JSON document per line on stdin and answers each
with one RingElem JSON document per line on stdout.
"""

import subprocess
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Literal

from logzero import logger
from pydantic import Field, PrivateAttr, ValidationError

from skein_integrator.diagram import SingularDiagram
from skein_integrator.errors import ExternalInvariantError
from skein_integrator.invariants.base_invariant import BaseSingularInvariant
from skein_integrator.ring import RingElem


class ExternalInvariant(BaseSingularInvariant):
    """Bridge to a user-supplied invariant server."""

    invariant_name: Literal["external"] = "external"
    command: tuple[str, ...] = Field(min_length=1)
    timeout: float = Field(default=30.0, gt=0)
    _process: subprocess.Popen[str] | None = PrivateAttr(default=None)
    _reader: ThreadPoolExecutor | None = PrivateAttr(default=None)
    _lock: threading.Lock = PrivateAttr(default_factory=threading.Lock)

    def _started(self) -> subprocess.Popen[str]:
        if self._process is not None and self._process.poll() is None:
            return self._process
        logger.debug(f"Starting invariant server: {' '.join(self.command)}")
        try:
            self._process = subprocess.Popen(  # noqa: S603
                list(self.command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as e:
            msg = f"Could not start invariant server {self.command[0]}: {e}"
            raise ExternalInvariantError(msg, {"command": list(self.command)}) from e
        if self._reader is None:
            self._reader = ThreadPoolExecutor(max_workers=1)
        return self._process

    def evaluate(self, d: SingularDiagram) -> RingElem:
        """Send the diagram to the child and parse its answer.

        Requests from several threads are answered one at a time.
        """
        with self._lock:
            return self._exchange(d)

    def _exchange(self, d: SingularDiagram) -> RingElem:
        process = self._started()
        request = d.to_json()
        if process.stdin is None or process.stdout is None or self._reader is None:
            msg = "Invariant server pipes are not available"
            raise ExternalInvariantError(msg, {"command": list(self.command)})
        try:
            process.stdin.write(request + "\n")
            process.stdin.flush()
        except OSError as e:
            msg = f"Invariant server exited with status {process.poll()}"
            raise ExternalInvariantError(msg, {"diagram": request}) from e

        pending = self._reader.submit(process.stdout.readline)
        try:
            line = pending.result(timeout=self.timeout)
        except TimeoutError as e:
            self.close()
            msg = f"Invariant server did not answer within {self.timeout} seconds"
            raise ExternalInvariantError(msg, {"diagram": request}) from e

        if not line:
            status = process.wait()
            msg = f"Invariant server exited with status {status}"
            raise ExternalInvariantError(msg, {"diagram": request, "status": status})
        try:
            return RingElem.model_validate_json(line)
        except ValidationError as e:
            msg = f"Malformed invariant server output: {line.strip()!r}"
            raise ExternalInvariantError(
                msg, {"diagram": request, "line": line.strip()}
            ) from e

    def close(self) -> None:
        """Stop the child process."""
        if self._process is not None:
            if self._process.poll() is None:
                self._process.kill()
            self._process.wait()
            for pipe in (self._process.stdin, self._process.stdout):
                if pipe is not None:
                    pipe.close()
            self._process = None
        if self._reader is not None:
            self._reader.shutdown(wait=False)
            self._reader = None
