"""Chat-completion access with interchangeable backends.

Three backends share one interface: a live OpenAI-compatible HTTP
endpoint (with retry/backoff and rate limiting), deterministic replay
from a recorded cassette, and a scripted queue for tests. Requests are
fingerprinted over (system text, user text, model, temperature, sequence
index); the sequence index counts repeats of an identical prompt so that
sampling the same prompt at temperature > 0 records distinct responses
and replays them in order.
"""

import hashlib
import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .prompting import BudgetExceeded, PromptBundle

log = logging.getLogger(__name__)


class TransportError(RuntimeError):
    """Live endpoint failure that survived the retry policy."""


class CassetteMiss(LookupError):
    """Replay was asked for a request that was never recorded."""


@dataclass(frozen=True)
class ChatParams:
    model_id: str = "gpt-4"
    temperature: float = 0.7
    max_response_tokens: int | None = None
    request_cap_tokens: int = 8000

    def __post_init__(self):
        if not 0 <= self.temperature <= 2:
            raise ValueError("temperature must be within 0..2")


def request_fingerprint(
    system_text: str, user_text: str, model_id: str, temperature: float, sequence_index: int
) -> str:
    payload = json.dumps(
        [system_text, user_text, model_id, repr(temperature), sequence_index],
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Cassette:
    """Append-only JSONL log of fingerprint -> response records."""

    FIELDS = ("request_fingerprint", "sequence_index", "response_text")

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, fingerprint: str, sequence_index: int, response_text: str) -> None:
        record = {
            "request_fingerprint": fingerprint,
            "sequence_index": sequence_index,
            "response_text": response_text,
        }
        line = json.dumps(record, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def load(self) -> dict[str, str]:
        if not self.path.exists():
            return {}
        responses: dict[str, str] = {}
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            responses[record["request_fingerprint"]] = record["response_text"]
        return responses


class ScriptedBackend:
    """Returns queued responses in order; used by tests and demos."""

    def __init__(self, responses: list[str] | None = None):
        self._responses = list(responses or [])
        self._lock = threading.Lock()

    def push(self, *responses: str) -> None:
        with self._lock:
            self._responses.extend(responses)

    def complete(self, system_text: str, user_text: str, params: ChatParams, fingerprint: str) -> str:
        with self._lock:
            if not self._responses:
                raise TransportError("scripted backend has no responses left")
            return self._responses.pop(0)


class ReplayBackend:
    """Answers from a cassette by fingerprint."""

    def __init__(self, cassette: Cassette):
        self._responses = cassette.load()

    def complete(self, system_text: str, user_text: str, params: ChatParams, fingerprint: str) -> str:
        if fingerprint not in self._responses:
            raise CassetteMiss(f"no recorded response for fingerprint {fingerprint}")
        return self._responses[fingerprint]


class LiveBackend:
    """OpenAI-compatible POST /chat/completions with bounded retry."""

    RETRY_DELAYS = (1.0, 4.0, 16.0)

    def __init__(
        self,
        base_url: str,
        api_key: str,
        session=None,
        timeout: float = 120.0,
        sleep=time.sleep,
    ):
        if session is None:
            import requests

            session = requests.Session()
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.session = session
        self.timeout = timeout
        self.sleep = sleep

    def complete(self, system_text: str, user_text: str, params: ChatParams, fingerprint: str) -> str:
        body = {
            "model": params.model_id,
            "temperature": params.temperature,
            "messages": [
                {"role": "system", "content": system_text},
                {"role": "user", "content": user_text},
            ],
        }
        if params.max_response_tokens is not None:
            body["max_tokens"] = params.max_response_tokens
        headers = {"Authorization": f"Bearer {self.api_key}"}
        url = f"{self.base_url}/chat/completions"
        last_error = "no attempt made"
        for attempt, delay in enumerate((*self.RETRY_DELAYS, None)):
            try:
                response = self.session.post(url, json=body, headers=headers, timeout=self.timeout)
            except Exception as exc:  # transport-level failure
                last_error = f"transport failure: {exc}"
            else:
                status = getattr(response, "status_code", 0)
                if status == 200:
                    try:
                        return response.json()["choices"][0]["message"]["content"]
                    except (KeyError, IndexError, TypeError, ValueError) as exc:
                        raise TransportError(f"malformed completion payload: {exc}") from exc
                if status == 429 or 500 <= status < 600:
                    last_error = f"retryable status {status}"
                else:
                    raise TransportError(f"endpoint returned status {status}")
            if delay is None:
                break
            log.warning("chat completion attempt %d failed (%s), retrying in %.0fs", attempt + 1, last_error, delay)
            self.sleep(delay)
        raise TransportError(f"gave up after {1 + len(self.RETRY_DELAYS)} attempts: {last_error}")


class RateLimiter:
    """Token bucket plus a max-in-flight bound."""

    def __init__(self, rate_per_sec: float | None = None, max_in_flight: int | None = None, clock=time.monotonic, sleep=time.sleep):
        self.rate = rate_per_sec
        self.capacity = 1.0
        self.tokens = 1.0
        self.updated = clock()
        self.clock = clock
        self.sleep = sleep
        self._lock = threading.Lock()
        self._slots = threading.BoundedSemaphore(max_in_flight) if max_in_flight else None

    def __enter__(self):
        if self._slots is not None:
            self._slots.acquire()
        if self.rate:
            while True:
                with self._lock:
                    now = self.clock()
                    self.tokens = min(self.capacity, self.tokens + (now - self.updated) * self.rate)
                    self.updated = now
                    if self.tokens >= 1.0:
                        self.tokens -= 1.0
                        return self
                    wait = (1.0 - self.tokens) / self.rate
                self.sleep(wait)
        return self

    def __exit__(self, *exc):
        if self._slots is not None:
            self._slots.release()
        return False


@dataclass
class Gateway:
    """Sequencing, budget checks, recording and rate limiting around a backend."""

    backend: object
    params: ChatParams = field(default_factory=ChatParams)
    record_to: Cassette | None = None
    limiter: RateLimiter | None = None

    def __post_init__(self):
        self._counts: dict[str, int] = {}
        self._lock = threading.Lock()

    def reset_sequence(self) -> None:
        with self._lock:
            self._counts.clear()

    def next_fingerprint(self, system_text: str, user_text: str) -> tuple[str, int]:
        base = request_fingerprint(system_text, user_text, self.params.model_id, self.params.temperature, 0)
        with self._lock:
            index = self._counts.get(base, 0)
            self._counts[base] = index + 1
        if index == 0:
            return base, 0
        return (
            request_fingerprint(system_text, user_text, self.params.model_id, self.params.temperature, index),
            index,
        )

    def complete(self, bundle: PromptBundle) -> tuple[str, str]:
        """Send one prompt bundle; returns (response text, fingerprint)."""
        if bundle.token_estimate > self.params.request_cap_tokens:
            raise BudgetExceeded(
                f"prompt estimate {bundle.token_estimate} exceeds request cap "
                f"{self.params.request_cap_tokens}"
            )
        fingerprint, index = self.next_fingerprint(bundle.system_text, bundle.user_text)
        limiter = self.limiter
        if limiter is None:
            response = self.backend.complete(bundle.system_text, bundle.user_text, self.params, fingerprint)
        else:
            with limiter:
                response = self.backend.complete(bundle.system_text, bundle.user_text, self.params, fingerprint)
        if self.record_to is not None:
            self.record_to.append(fingerprint, index, response)
        return response, fingerprint
