import os
import subprocess


def start_backend():
    host = os.getenv("ERRLAB_HOST", "127.0.0.1")
    port = os.getenv("ERRLAB_PORT", "8000")
    subprocess.run(["uvicorn", "main:app", "--host", host, "--port", port, "--reload"])


if __name__ == "__main__":
    start_backend()
