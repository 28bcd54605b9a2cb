from fastapi import FastAPI
from routes.sweep_routes import router as sweep_router


def include_routes(app: FastAPI):
    app.include_router(sweep_router, prefix="/sweep", tags=["Sweep"])
