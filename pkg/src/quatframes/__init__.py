"""Quaternionic linear algebra and operator-adapted frame toolkit.

Layers, bottom up:

- quaternion:  scalar arithmetic (Hamilton convention);
- qlinalg:     right quaternionic vectors/matrices, complex embedding, SVD,
               pseudo-inverse, Hermitian eigensolve, operator square root;
- frames:      synthesis/analysis/frame operators, optimal K-frame bounds
               and classification certificates;
- duals:       exact and approximate K-duals, the canonical dual, both dual
               characterizations and the Psi upgrade of approximate duals;
- verify:      seeded random instances and the theorem-verification engine;
- fileio/cli:  JSON instance files and the `quatframes` command.
"""

from .quaternion import Quaternion, qconj, qinv, qisclose, qmodulus, qmul
from .qlinalg import (
    QMatrix,
    QVector,
    SVDResult,
    adjoint,
    embed,
    from_embedding,
    herm_eig,
    inner,
    matmul,
    matvec,
    opnorm,
    pinv,
    random_qmatrix,
    random_qvector,
    range_projector,
    solve_on_subspace,
    sqrt_psd,
    svd,
    symplectic_form,
    vnorm,
)
from .frames import (
    FrameSystem,
    KFrameCertificate,
    analysis,
    classify_frame,
    frame_operator,
    is_parseval_k_frame,
    k_frame_bounds,
    synthesis,
)
from .duals import (
    DualPair,
    FreeFactor,
    approx_deficit,
    approx_transfer,
    approx_upgrade,
    atomic_sequence,
    canonical_k_dual,
    dual_from_free_factor,
    dual_from_synthesis_factor,
    duality_lower_bound,
    duality_residual,
    extract_free_factor,
    extract_synthesis_factor,
    is_k_dual,
    projected_dual_approx,
    psi_operator,
)
from .verify import (
    Instance,
    VerificationReport,
    brute_force_bound_oracle,
    gen_instance,
    run_suite,
)
from .fileio import (
    InstanceFileError,
    instance_from_dict,
    instance_to_dict,
    parse_instance_file,
    save_instance,
)

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path to one of the bundled example instance files."""
    from importlib import resources

    return resources.files(__package__) / "fixtures" / name
