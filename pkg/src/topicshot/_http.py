"""HTTP plumbing for the remote inference backends.

Transport failures (connection errors, timeouts, 5xx) are retried with
bounded exponential backoff; contract problems (4xx, non-JSON bodies) are
not retried.  A semaphore caps in-flight requests per backend instance.
"""

from __future__ import annotations

import threading
import time
from typing import Any

import requests


class TransportError(RuntimeError):
    """The service could not be reached or kept failing; carries the endpoint."""

    def __init__(self, endpoint: str, attempts: int, cause: str):
        super().__init__(f"transport error calling {endpoint} after {attempts} attempt(s): {cause}")
        self.endpoint = endpoint
        self.attempts = attempts


class ContractViolationError(RuntimeError):
    """The service answered, but outside the wire contract."""


def post_json(
    endpoint: str,
    payload: dict[str, Any],
    *,
    timeout: float = 30.0,
    retries: int = 3,
    backoff: float = 0.2,
    semaphore: threading.Semaphore | None = None,
) -> dict[str, Any]:
    """POST ``payload`` as JSON and return the decoded JSON response."""
    last_cause = "no attempt made"
    attempts = 0
    for attempt in range(retries + 1):
        attempts = attempt + 1
        if attempt:
            time.sleep(backoff * 2 ** (attempt - 1))
        try:
            if semaphore is not None:
                with semaphore:
                    resp = requests.post(endpoint, json=payload, timeout=timeout)
            else:
                resp = requests.post(endpoint, json=payload, timeout=timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            last_cause = str(exc) or type(exc).__name__
            continue
        if resp.status_code >= 500:
            last_cause = f"HTTP {resp.status_code}"
            continue
        if resp.status_code >= 400:
            raise ContractViolationError(
                f"{endpoint} rejected the request: HTTP {resp.status_code} {resp.text[:200]}"
            )
        try:
            body = resp.json()
        except ValueError as exc:
            raise ContractViolationError(f"{endpoint} returned a non-JSON body") from exc
        if not isinstance(body, dict):
            raise ContractViolationError(f"{endpoint} returned a non-object JSON body")
        return body
    raise TransportError(endpoint, attempts, last_cause)
