import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "src"))

from gateway import app  # noqa: F401 - re-exported for uvicorn main:app

if __name__ == "__main__":
    if len(sys.argv) > 1:
        # python main.py verify --suite haar  behaves like the qsphere script
        from qsphere.cli import main as cli_main

        sys.exit(cli_main(sys.argv[1:]))

    import uvicorn

    from core.config import PORT

    uvicorn.run(
        "main:app",
        host="127.0.0.1",
        port=PORT,
        log_level="info",
        access_log=False,
        server_header=False,
    )
