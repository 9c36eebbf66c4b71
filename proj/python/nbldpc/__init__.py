"""Non-binary LDPC codes over GF(2^m) with multilevel modulation.

Construction (progressive edge growth), FFT-based q-ary belief propagation,
multistage decoding of lattice-partitioned QAM, Monte-Carlo block-error
simulation, and the matching capacity / complexity / error-floor analysis.
"""

from ._core import (
    CapacityEstimate,
    Code,
    ComplexityParams,
    ComplexityReport,
    DecodeOptions,
    DecodeResult,
    DegreeProfile,
    GaloisField,
    LevelReport,
    MlcScheme,
    MsdResult,
    OpCounts,
    QspaDecoder,
    RunOptions,
    SchemeSpec,
    SimPoint,
    StopRule,
    __version__,
    cm_capacity,
    complexity_estimate,
    complexity_for_code,
    complexity_for_scheme,
    complexity_presets,
    ebn0_to_n0,
    error_floor_uncoded,
    peg_construct,
    preset,
    preset_names,
    qfunc,
    run_point,
    shannon_limit_db,
    sweep,
)

__all__ = [
    "CapacityEstimate",
    "Code",
    "ComplexityParams",
    "ComplexityReport",
    "DecodeOptions",
    "DecodeResult",
    "DegreeProfile",
    "GaloisField",
    "LevelReport",
    "MlcScheme",
    "MsdResult",
    "OpCounts",
    "QspaDecoder",
    "RunOptions",
    "SchemeSpec",
    "SimPoint",
    "StopRule",
    "__version__",
    "cm_capacity",
    "complexity_estimate",
    "complexity_for_code",
    "complexity_for_scheme",
    "complexity_presets",
    "ebn0_to_n0",
    "error_floor_uncoded",
    "peg_construct",
    "preset",
    "preset_names",
    "qfunc",
    "run_point",
    "shannon_limit_db",
    "sweep",
]
