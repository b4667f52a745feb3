"""Run the sidecar: ``python -m inference_sidecar``.

Environment:
    SIDECAR_PORT      listen port (default 8800)
    SIDECAR_MODE      "stub" (default) or "real"
    SIDECAR_FIXTURES  path to a recorded-fixtures JSON file (stub mode)
"""

import os

import uvicorn

from .service import create_app


def main() -> None:
    port = int(os.environ.get("SIDECAR_PORT", "8800"))
    uvicorn.run(create_app(), host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
