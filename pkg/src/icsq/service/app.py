"""FastAPI service wrapping the scenario checker and analysis engine.

Every endpoint is a stateless computation over the request body, so the
service scales to concurrent clients without shared state. Run it with:

    uvicorn icsq.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import bell, casebook, ks, quantum
from ..checker import InternalLimit, check
from ..elaborate import elaborate, resolve_pair
from ..lang import parse
from .schemas import (
    BellRequest,
    BellResponse,
    CheckRequest,
    CheckResponse,
    DiagnosticModel,
    ExampleListResponse,
    ExampleResponse,
    KSRequest,
    KSResponse,
    LHVWitnessModel,
    ParseErrorModel,
    ProbRequest,
    ProbResponse,
    RepeatRequest,
    RepeatResponse,
    SpanModel,
)

app = FastAPI(
    title="icsq",
    description=(
        "Scenario checking and quantum analysis for configuration-relative "
        "outcome claims: semantic diagnostics, Born probabilities, CHSH/Bell "
        "correlations, and Kochen-Specker colorability."
    ),
    version="0.1.0",
)


def _diag_model(diag) -> DiagnosticModel:
    return DiagnosticModel(
        code=diag.code,
        severity=diag.severity,
        message=diag.message,
        span=SpanModel(line=diag.span.line, col=diag.span.col, len=diag.span.length),
        statement=diag.statement,
    )


def _parse_or_422(source: str):
    result = parse(source)
    if not result.ok:
        detail = [
            {"message": e.message, "line": e.span.line, "col": e.span.col}
            for e in result.errors
        ]
        raise HTTPException(status_code=422, detail={"parse_errors": detail})
    return result.scenario


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/check", response_model=CheckResponse)
def check_scenario(request: CheckRequest) -> CheckResponse:
    result = parse(request.source)
    if not result.ok:
        return CheckResponse(
            ok=False,
            parse_errors=[
                ParseErrorModel(
                    message=e.message,
                    line=e.span.line,
                    col=e.span.col,
                    expected=list(e.expected),
                )
                for e in result.errors
            ],
        )
    try:
        report = check(result.scenario)
    except InternalLimit as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    has_errors = any(d.severity == "error" for d in report.diagnostics)
    return CheckResponse(
        ok=not has_errors,
        diagnostics=[_diag_model(d) for d in report.diagnostics],
        admissible_statements=list(report.admissible_statements),
    )


@app.post("/prob", response_model=ProbResponse)
def probabilities(request: ProbRequest) -> ProbResponse:
    scenario = _parse_or_422(request.source)
    try:
        env = elaborate(scenario)
        structure, config = resolve_pair(env, request.structure, request.config)
        dist = quantum.born_probabilities(structure, config)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc.args[0]))
    except (InternalLimit, quantum.QuantumError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return ProbResponse(
        structure=request.structure,
        config=request.config,
        probabilities={casebook.label_text(label): p for label, p in dist.items()},
    )


@app.post("/bell", response_model=BellResponse)
def bell_analysis(request: BellRequest) -> BellResponse:
    import math

    values = [request.a, request.a_prime, request.b, request.b_prime]
    if request.degrees:
        values = [math.radians(v) for v in values]
    try:
        settings = bell.AngleSettings(alice=(values[0], values[1]), bob=(values[2], values[3]))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    a, ap = settings.alice
    b, bp = settings.bob
    correlations = {
        "E_ab": bell.correlation(a, b),
        "E_ab_prime": bell.correlation(a, bp),
        "E_a_prime_b": bell.correlation(ap, b),
        "E_a_prime_b_prime": bell.correlation(ap, bp),
    }
    s_value = (
        correlations["E_ab"]
        - correlations["E_ab_prime"]
        + correlations["E_a_prime_b"]
        + correlations["E_a_prime_b_prime"]
    )
    lhv = bell.lhv_max_chsh()
    feasibility = bell.joint_distribution_exists(bell.table_from_singlet(settings))
    return BellResponse(
        angles={"a": a, "a_prime": ap, "b": b, "b_prime": bp},
        correlations=correlations,
        S=s_value,
        abs_S=abs(s_value),
        lhv_max=float(lhv.max),
        lhv_witness=LHVWitnessModel(
            alice=list(lhv.witness.alice_values), bob=list(lhv.witness.bob_values)
        ),
        joint_distribution_exists=feasibility.exists,
    )


@app.post("/ks", response_model=KSResponse)
def ks_analysis(request: KSRequest) -> KSResponse:
    if (request.instance is None) == (request.source is None):
        raise HTTPException(
            status_code=400, detail="provide exactly one of 'instance' or 'source'"
        )
    if request.instance is not None:
        try:
            instance = ks.load_builtin(request.instance)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc.args[0]))
        name = request.instance
    else:
        try:
            instance = ks.parse_instance(request.source)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        name = "inline"
    problems = ks.verify_instance(instance)
    if problems:
        raise HTTPException(
            status_code=422, detail={"instance_problems": [p.message for p in problems]}
        )
    result = ks.color(instance)
    witness = (
        [result.witness.assignment[i] for i in range(len(instance.rays))]
        if result.witness is not None
        else None
    )
    return KSResponse(
        instance=name,
        dim=instance.dim,
        rays=len(instance.rays),
        contexts=len(instance.contexts),
        colorable=result.colorable,
        witness=witness,
        nodes_explored=result.nodes_explored,
    )


@app.post("/repeat", response_model=RepeatResponse, response_model_by_alias=True)
def repeatability(request: RepeatRequest) -> RepeatResponse:
    scenario = _parse_or_422(request.source)
    try:
        env = elaborate(scenario)
        structure, config = resolve_pair(env, request.structure, request.config)
        report = quantum.repeatability_check(
            structure, config, request.seed, request.n, request.tol
        )
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc.args[0]))
    except (InternalLimit, quantum.QuantumError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return RepeatResponse(
        structure=request.structure,
        config=request.config,
        n=request.n,
        seed=request.seed,
        tol=request.tol,
        max_abs_deviation=report.max_abs_deviation,
        passed=report.passed,
    )


@app.get("/examples", response_model=ExampleListResponse)
def list_examples() -> ExampleListResponse:
    return ExampleListResponse(examples=list(casebook.CASE_NAMES))


@app.get("/examples/{name}", response_model=ExampleResponse)
def get_example(name: str) -> ExampleResponse:
    try:
        case = casebook.load_case(name)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc.args[0]))
    return ExampleResponse(
        name=case.name, source=case.source, expected_codes=case.expected_codes
    )
