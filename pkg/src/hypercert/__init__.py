"""Certified bounds for hypercontractive 2->q and p->q matrix norms."""
from .certify import (
    CertificateReport,
    ProxyList,
    PToQReport,
    baseline_certificate,
    build_Mi,
    decide,
    flatten_check,
    frobenius_Mv,
    gamma_p,
    guth_certificate,
    p_to_q_certificate,
    proxy_certificate,
)
from .core import (
    CapacityError,
    DegenerateInputError,
    InvalidArgumentError,
    expectation_q_norm,
    gram,
    normalize_rows,
    prescale,
)
from .generators import (
    GeneratorSpec,
    gen_appendixA_spike,
    gen_gaussian,
    gen_planted_spike,
    gen_rank_one,
    generate,
)
from .oracle import OracleResult, ascend, grid_oracle_2d, oracle_lower_bound
from .spectral import SpectralWitness, top_eigenpair_psd, top_singular_pair

__version__ = "0.1.0"
