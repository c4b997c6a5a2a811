"""Hardy norms of vector-valued Dirichlet polynomials and randomized averages."""

from .bohr import (
    MultiIndex,
    PrimeAP,
    PrimeTable,
    TorusPoint,
    factorize,
    index_of,
    monomial_eval,
    prime_ap_search,
    primes_up_to,
)
from .constants import (
    RatioReport,
    SearchConfig,
    SearchResult,
    cotype_constant_witness,
    experiment_lacunary_power,
    experiment_prime_ap,
    experiment_summing_basis,
    ruc_constant_search,
    ruc_ratio,
    rud_ratio,
    type_constant_witness,
)
from .dirichlet import (
    DirichletPolynomial,
    PolytorusPolynomial,
    bohr_lift,
    circle_hp_norm,
    coefficient,
    dirichlet_kernel_l1,
    hp_norm,
    partial_sum,
    scalar_polynomial,
    vertical_translate,
)
from .errors import (
    ArityError,
    DomainError,
    OverflowLimitError,
    ResourceError,
    ShapeError,
    UndefinedRatioError,
    ValidationError,
)
from .randomized import (
    ContractionReport,
    contraction_check,
    gaussian_average,
    hprad_norm,
    kahane_ratio,
    rad_norm,
    rademacher_average,
    steinhaus_average,
)
from .sampling import Estimate, GridPolicy, SamplerConfig
from .serialization import ParsedProblem, parse_problem, serialize_problem
from .spaces import (
    FunctionLr,
    HilbertSpace,
    SequenceSpace,
    SupSpace,
    TrigPolynomial,
    norm,
    summing_combination,
    trig_eval,
)

__version__ = "0.1.0"
