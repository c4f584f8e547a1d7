"""Pydantic request/response models for the verification service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class ServiceInfo(BaseModel):
    name: str
    version: str
    endpoints: list[str]


class LineRecord(BaseModel):
    index: int
    name: str
    coeffs: list[int]
    meets: list[int]


class LinesSummary(BaseModel):
    lines: int


class LinesResponse(BaseModel):
    command: str
    reports: list[LineRecord]
    summary: LinesSummary


class Lemma21Request(BaseModel):
    self_test: bool = False


class Lemma21Report(BaseModel):
    tuples_checked: int
    with_sixth: int
    without_sixth: int
    equivalence_failures: int
    uniqueness_failures: int


class Lemma21Summary(BaseModel):
    failures: int


class Lemma21Response(BaseModel):
    command: str
    self_test: bool
    report: Lemma21Report
    summary: Lemma21Summary


class FibrationChecks(BaseModel):
    pair_count: int
    pairs_meet: bool
    pair_sums_match_fiber: bool
    base_dot_fiber: int
    fiber_self_intersection: int
    one_per_pair_choices_skew: bool


class FibrationRecord(BaseModel):
    line: str
    index: int
    F: list[int]
    pairs: list[list[str]]
    checks: FibrationChecks


class FibrationsSummary(BaseModel):
    lines: int
    failures: int


class FibrationsResponse(BaseModel):
    command: str
    reports: list[FibrationRecord]
    summary: FibrationsSummary


class SweepRequest(BaseModel):
    seed: int = 0
    random_count: int = 0
    include_cyclic: bool = True
    include_stabilizers: bool = True
    jobs: int = Field(default=1, ge=1, le=64)
    max_gens: int = Field(default=3, ge=1, le=8)
    gens: list[str] | None = None


class SweepConfigEcho(BaseModel):
    seed: int
    random_count: int
    include_cyclic: bool
    include_stabilizers: bool
    max_gens: int
    gens: list[str] | None


class Signature(BaseModel):
    order: int
    orbit_sizes: list[int]


class Invariants(BaseModel):
    torsion: list[int]
    free_rank: int


class NormPass(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    finite: bool
    three_primary: bool
    line_implies_trivial: bool


class NormReportModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    signature: Signature
    rank_fixed: int
    quotient: Invariants
    fixed_line: bool
    h1: Invariants
    pass_: NormPass = Field(alias="pass")


class VerifyFailure(BaseModel):
    gens: list[str]
    failed: list[str]
    report: NormReportModel


class VerifySummary(BaseModel):
    families: int
    max_quotient: list[int]
    failures: int


class VerifyResponse(BaseModel):
    command: str
    config: SweepConfigEcho
    reports: list[NormReportModel]
    summary: VerifySummary
    failures: list[VerifyFailure]


class SectionRecord(BaseModel):
    signature: Signature
    line: str
    section_exists: bool
    skew_fixed_line_exists: bool
    forward_ok: bool
    equivalence_ok: bool
    fiber_annihilation_ok: bool
    quotient_trivial: bool


class Divergence(BaseModel):
    gens: list[str]
    record: SectionRecord


class Thm23Summary(BaseModel):
    pairs: int
    forward_failures: int
    equivalence_divergences: int
    annihilation_failures: int
    quotient_failures: int


class Thm23Response(BaseModel):
    command: str
    config: SweepConfigEcho
    reports: list[SectionRecord]
    divergences: list[Divergence]
    summary: Thm23Summary
