import logging
import os

import uvicorn
from fastapi import FastAPI

from routes.routes_mapping import include_routes
from routes.sweep_routes import OUTPUT_DIR

logging.basicConfig(level=os.getenv("ERRLAB_LOG_LEVEL", "INFO"),
                    format="%(asctime)s %(levelname)s %(name)s: %(message)s")

OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

app = FastAPI(title="Error-Rate Lab", description="SER/BER for BPSK, PAM and QAM over AWGN and Rayleigh",
              version="1.0.0")

include_routes(app)


@app.get("/")
async def root():
    return {"message": "Error-rate lab: POST /sweep/run with a sweep config, GET /sweep/report for the closed-form check."}

# Run the application with Uvicorn
if __name__ == "__main__":
    uvicorn.run("main:app", host="0.0.0.0", port=8000, reload=True)
