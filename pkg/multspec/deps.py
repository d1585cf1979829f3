import asyncio
import hmac
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from fastapi import Depends, HTTPException, Request, status
from fastapi.security import HTTPAuthorizationCredentials, HTTPBearer

from .config import settings

logger = logging.getLogger(__name__)

security = HTTPBearer(auto_error=False)

_WINDOW_SECONDS = 60.0


@dataclass
class _ClientWindows:
    """Fixed one-minute request windows keyed by client address."""

    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    windows: Dict[str, Tuple[int, float]] = field(default_factory=dict)

    async def admit(self, client: str, limit: int) -> Optional[float]:
        """Count one request; return seconds until reset when the window is full."""
        now = time.monotonic()
        async with self.lock:
            count, reset_at = self.windows.get(client, (0, now + _WINDOW_SECONDS))
            if reset_at <= now:
                count, reset_at = 0, now + _WINDOW_SECONDS
            if count >= limit:
                return reset_at - now
            self.windows[client] = (count + 1, reset_at)
            return None

    def clear(self) -> None:
        self.windows.clear()


_clients = _ClientWindows()


async def verify_api_key(credentials: Optional[HTTPAuthorizationCredentials] = Depends(security)) -> None:
    """Require the bearer token when MULTSPEC_API_KEY is set."""
    expected = settings.api_key
    if not expected:
        return
    supplied = credentials.credentials if credentials else ""
    if not hmac.compare_digest(supplied.encode(), expected.encode()):
        raise HTTPException(
            status_code=status.HTTP_401_UNAUTHORIZED,
            detail={"message": "Unauthorized", "type": "auth_error", "code": "invalid_api_key"},
        )


async def rate_limiter(request: Request) -> None:
    limit = settings.rate_limit_per_minute
    if limit <= 0:
        return
    client = request.client.host if request.client else "anonymous"
    retry_after = await _clients.admit(client, limit)
    if retry_after is not None:
        logger.info("rate limit hit for %s (%d/min)", client, limit)
        raise HTTPException(
            status_code=status.HTTP_429_TOO_MANY_REQUESTS,
            detail={"message": "Rate limit exceeded", "type": "rate_limit_error", "code": None},
            headers={"Retry-After": str(max(1, math.ceil(retry_after)))},
        )


def reset_rate_limits() -> None:
    _clients.clear()
