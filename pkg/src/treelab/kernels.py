"""Backend selection for the split-search kernels.

The compiled module is used when it was built; otherwise the numpy fallback
is imported. Set ``TREELAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("TREELAB_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import (  # noqa: F401
        best_subset,
        class_totals,
        contingency,
        entropy,
        gini,
        scan_threshold,
    )

    BACKEND = "python"
else:
    try:
        from ._ckernels import (  # noqa: F401
            best_subset,
            class_totals,
            contingency,
            entropy,
            gini,
            scan_threshold,
        )

        BACKEND = "cython"
    except ImportError:
        from ._pykernels import (  # noqa: F401
            best_subset,
            class_totals,
            contingency,
            entropy,
            gini,
            scan_threshold,
        )

        BACKEND = "python"

ENTROPY = 0
GINI = 1
