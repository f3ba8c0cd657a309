"""Language-model adapter for relocation candidate election.

A narrow choose-one-of-N contract: build a deterministic prompt from the
reading material, recent history, and candidate sentences, then ask a
provider to pick an option.  Providers never raise into the caller; any
timeout, transport failure, or unparseable reply yields ``None`` and the
election proceeds bonus-free.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass, field

import requests

log = logging.getLogger(__name__)

PROMPT_TEMPLATE = (
    "The user was just reading: {material}, "
    "which option is most likely to be read next by the user?"
)


@dataclass(frozen=True)
class ElectionQuery:
    material: str
    recent_history: str  # sentences read since last relocation, most recent last
    options: tuple[str, ...]  # candidate sentences, at most 3

    def __post_init__(self) -> None:
        if not (2 <= len(self.options) <= 3):
            raise ValueError("election query needs 2 or 3 options")
        if not self.recent_history.strip():
            raise ValueError("recent history must be non-empty")


@dataclass(frozen=True)
class ProviderConfig:
    provider: str = "mock"  # "mock" or "external"
    endpoint_url: str = ""
    model_name: str = "gpt-4o-mini"
    timeout_ms: int = 3000
    api_key_env_var: str = "READTRACK_LLM_API_KEY"

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")


def _flatten(text: str) -> str:
    return " ".join(text.split())


def build_prompt(q: ElectionQuery) -> str:
    lines = [PROMPT_TEMPLATE.format(material=_flatten(q.material))]
    lines.append("")
    lines.append(f"Recent reading history (most recent last): {_flatten(q.recent_history)}")
    lines.append("Options:")
    for i, opt in enumerate(q.options, start=1):
        lines.append(f"{i}. {_flatten(opt)}")
    lines.append("Answer with the option number only.")
    return "\n".join(lines)


def _tokens(text: str) -> list[str]:
    return re.findall(r"[a-z0-9']+", text.lower())


def _last_sentence(text: str) -> str:
    parts = [p for p in re.split(r"[.!?]", text) if p.strip()]
    return parts[-1] if parts else text


# Function words carry no topical signal; counting them would let "the" or
# "and" decide elections.
_STOPWORDS = frozenset(
    "a an and are as at be but by for from had has have in into is it its of "
    "on or so that the their them then there these they this to was were "
    "which while who will with would".split()
)


class MockProvider:
    """Deterministic offline stand-in: content-word overlap with the last
    sentence of the reading history, ties to the lowest option index."""

    OPENING_TOKENS = 10

    def choose(self, q: ElectionQuery) -> int | None:
        history_tokens = set(_tokens(_last_sentence(q.recent_history))) - _STOPWORDS
        best_idx, best_score = 0, -1
        for i, opt in enumerate(q.options):
            opening = [
                t for t in _tokens(opt) if t not in _STOPWORDS
            ][: self.OPENING_TOKENS]
            score = sum(1 for tok in opening if tok in history_tokens)
            if score > best_score:
                best_idx, best_score = i, score
        return best_idx


class ExternalProvider:
    """Chat-completion HTTP provider (OpenAI-style wire convention)."""

    def __init__(self, cfg: ProviderConfig):
        self.cfg = cfg

    def choose(self, q: ElectionQuery) -> int | None:
        prompt = build_prompt(q)
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.cfg.api_key_env_var, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        try:
            resp = requests.post(
                self.cfg.endpoint_url,
                json={
                    "model": self.cfg.model_name,
                    "messages": [{"role": "user", "content": prompt}],
                },
                headers=headers,
                timeout=self.cfg.timeout_ms / 1000.0,
            )
            resp.raise_for_status()
            content = resp.json()["choices"][0]["message"]["content"]
        except Exception as exc:  # degraded mode, never fatal
            log.warning("LLM provider failed, election proceeds bonus-free: %s", exc)
            return None
        return parse_option_reply(content, len(q.options))


class FaultInjectedProvider:
    """Always fails; used to exercise the bonus-free fallback path."""

    def choose(self, q: ElectionQuery) -> int | None:
        return None


def parse_option_reply(reply: str, n_options: int) -> int | None:
    """First integer in [1, n_options] found in the reply, 0-based."""
    for m in re.finditer(r"\d+", reply):
        v = int(m.group())
        if 1 <= v <= n_options:
            return v - 1
    return None


def make_provider(cfg: ProviderConfig):
    if cfg.provider == "mock":
        return MockProvider()
    if cfg.provider == "external":
        return ExternalProvider(cfg)
    raise ValueError(f"unknown provider: {cfg.provider!r}")


def choose(q: ElectionQuery, cfg: ProviderConfig) -> int | None:
    return make_provider(cfg).choose(q)
