"""Exact quadratic forms over quaternion division algebras.

Layers, bottom up: scalars (exact base fields), algebra (quaternion
algebras with involution), dlinalg (right modules and echelon forms),
dform (quadratic forms with distinguished certificates), witt
(isotropy / decomposition / cancellation), hermitian (the bridge to
hermitian and skew-hermitian forms), springerlab (odd-degree extension
experiments), cli (command line front end).
"""

__version__ = "0.1.0"
