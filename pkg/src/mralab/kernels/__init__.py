"""Series and chain-sampling kernels with a compiled fast path.

The Cython extension ``_ckernels`` is used when it has been built; otherwise
the numpy implementation in ``_pykernels`` is loaded. Set ``MRALAB_PURE_PYTHON=1``
to force the fallback (the benchmark and the parity tests do this).
"""

import os

from . import _pykernels

BACKEND = "python"
if os.environ.get("MRALAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

bessel_sum = _impl.bessel_sum
q_bessel_sum = _impl.q_bessel_sum
sample_chain = _impl.sample_chain

__all__ = ["BACKEND", "bessel_sum", "q_bessel_sum", "sample_chain"]
