"""Kernel dispatch: compiled extension if built, pure Python otherwise.

Set ``TOPREC_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and to debug suspected kernel issues).
"""

import os

if os.environ.get("TOPREC_PURE_PYTHON"):
    from toprec._kernels_py import (  # noqa: F401
        IMPLEMENTATION, convolve, convolve_trunc, power_series_inverse)
else:
    try:
        from toprec._speedups import (  # noqa: F401
            IMPLEMENTATION, convolve, convolve_trunc, power_series_inverse)
    except ImportError:
        from toprec._kernels_py import (  # noqa: F401
            IMPLEMENTATION, convolve, convolve_trunc, power_series_inverse)
