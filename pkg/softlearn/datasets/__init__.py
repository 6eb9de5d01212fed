from softlearn.datasets.generators import (  # noqa: F401
    SyntheticSpec,
    generate,
    inject_label_noise
)
from softlearn.datasets.csv_io import (  # noqa: F401
    CsvSchema,
    load_csv,
    write_csv
)
from softlearn.datasets.manifest import (  # noqa: F401
    CsvSource,
    load_manifest,
    materialize
)
