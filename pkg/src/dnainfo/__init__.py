"""Information content of DNA sequences: block entropy with finite-length
correction, autocorrelation and a Walsh-transform randomness coefficient."""

__version__ = "0.1.0"

from .seqcore import (  # noqa: E402
    BaseComposition,
    DnaInfoError,
    DnaSequence,
    Orientation,
    Region,
    RegionKind,
    composition,
    concat_regions,
    extract_region,
    reverse_complement,
)
from .ingest import (  # noqa: E402
    AnnotatedGenome,
    ParseError,
    load_annotated,
    parse_fasta,
    parse_features,
    parse_origin_block,
    read_sequences,
    render_origin_block,
)
from .entropy import (  # noqa: E402
    BlockDistribution,
    CountMode,
    EntropyProfile,
    block_entropy,
    count_blocks,
    entropy_profile,
    estimate_probability,
)
from .benchmark import (  # noqa: E402
    CorrectedProfile,
    CorrectionTable,
    EnsembleConfig,
    correction_table,
    corrected_profile,
    generate_random_sequence,
)
from .correlate import AutocorrSeries, NumericSignal, autocorrelation, substitute  # noqa: E402
from .walsh import (  # noqa: E402
    RandomnessReport,
    WalshSpectrum,
    adjust_to_power_of_two,
    count_independent,
    fwht_sequency,
    randomness_coefficient,
)
