"""HTTP surface wrapping the core package.

Every endpoint is a pure computation over the request payload; file handling
lives in the CLI client. Package errors map to 400 responses with the error
class name in the detail.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..activity import build_activity
from ..baselines import make_augmenter, augment
from ..diffusion import diffuse_sequence
from ..errors import StaaError
from ..evaluate import link_prediction_report
from ..synth import generate
from .schemas import (
    ActivityRequest,
    ActivityResponse,
    ActivityRow,
    AugmentRequest,
    CompareRequest,
    CompareResponse,
    DiffuseRequest,
    EvalRequest,
    EvalResponse,
    EvalRow,
    HealthResponse,
    MatricesResponse,
    MatrixModel,
    SequenceModel,
    SnapshotModel,
    SynthRequest,
    SynthResponse,
    LabelModel,
)


def _clean(value: float) -> float | None:
    return value if value is not None and math.isfinite(value) else None


def _eval_rows(rows: list[dict]) -> list[EvalRow]:
    return [
        EvalRow(
            augmenter=row["augmenter"],
            t=row["t"],
            auc=_clean(row["auc"]),
            noise_mean=_clean(row["noise_mean"]),
            persistent_mean=_clean(row["persistent_mean"]),
            suppression_ratio=_clean(row["suppression_ratio"]),
        )
        for row in rows
    ]


def create_app() -> FastAPI:
    app = FastAPI(title="staa", version=__version__)

    @app.exception_handler(StaaError)
    async def staa_error_handler(request: Request, exc: StaaError):
        return JSONResponse(
            status_code=400,
            content={"detail": f"{type(exc).__name__}: {exc}"},
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/diffuse", response_model=MatricesResponse)
    def diffuse(req: DiffuseRequest) -> MatricesResponse:
        seq = req.sequence.to_sequence()
        cfg = req.config.to_config()
        matrices = diffuse_sequence(seq, cfg)
        return MatricesResponse(
            matrices=[
                MatrixModel.from_matrix(t, d.matrix, d.rho_applied)
                for t, d in zip(seq.timestamps, matrices)
            ]
        )

    @app.post("/activity", response_model=ActivityResponse)
    def activity(req: ActivityRequest) -> ActivityResponse:
        table = build_activity(req.sequence.to_sequence(), req.config.to_config())
        return ActivityResponse(
            rows=[ActivityRow(**dict(zip(ActivityRow.model_fields, row))) for row in table.rows()]
        )

    @app.post("/augment", response_model=MatricesResponse)
    def augment_endpoint(req: AugmentRequest) -> MatricesResponse:
        seq = req.sequence.to_sequence()
        kind = make_augmenter(
            req.method,
            rate=req.rate,
            seed=req.seed,
            alpha=req.alpha,
            rho=req.rho,
            merge_mode=req.merge_mode,
            config=req.config.to_config(),
        )
        matrices = augment(seq, kind)
        sparsified = req.method in ("ppr", "staa")
        return MatricesResponse(
            matrices=[
                MatrixModel.from_matrix(t, m, rho_applied=sparsified)
                for t, m in zip(seq.timestamps, matrices)
            ]
        )

    @app.post("/synth", response_model=SynthResponse)
    def synth(req: SynthRequest) -> SynthResponse:
        result = generate(req.to_spec())
        return SynthResponse(
            sequence=SequenceModel.from_sequence(result.sequence),
            labels=[LabelModel(t=t, u=u, v=v, label=label) for t, u, v, label in result.labels],
            active_nodes=list(result.active_nodes),
            next_snapshot=SnapshotModel.from_snapshot(result.next_snapshot),
        )

    @app.post("/eval", response_model=EvalResponse)
    def evaluate(req: EvalRequest) -> EvalResponse:
        matrices = {m.t: m.to_matrix() for m in req.matrices}
        labels = [(l.t, l.u, l.v, l.label) for l in req.labels] if req.labels else None
        rows = link_prediction_report(
            matrices, req.truth.to_snapshot(), req.seed, labels=labels, augmenter=req.augmenter
        )
        return EvalResponse(rows=_eval_rows(rows))

    @app.post("/compare", response_model=CompareResponse)
    def compare(req: CompareRequest) -> CompareResponse:
        seq = req.sequence.to_sequence()
        cfg = req.config.to_config()
        truth = req.truth.to_snapshot()
        labels = [(l.t, l.u, l.v, l.label) for l in req.labels] if req.labels else None
        all_rows: list[EvalRow] = []
        for method in req.methods:
            kind = make_augmenter(method, rate=req.rate, seed=req.seed, config=cfg)
            matrices = dict(zip(seq.timestamps, augment(seq, kind)))
            rows = link_prediction_report(
                matrices, truth, req.seed, labels=labels, augmenter=method
            )
            all_rows.extend(_eval_rows(rows))
        return CompareResponse(rows=all_rows)

    return app
