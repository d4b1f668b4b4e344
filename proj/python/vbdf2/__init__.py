"""Variable-step BDF2 time stepping with discrete orthogonal convolution
kernels: nonuniform meshes, kernel identities, stability probes and the
manufactured heat-equation experiments."""

from ._vbdf2 import (
    Bdf2Kernels,
    RatioProfile,
    TimeMesh,
    build_bdf2_kernels,
    c_r_constant,
    c_r_constant_of,
    capped_random_mesh,
    check_s1,
    dahlquist_march,
    doc_explicit,
    doc_recursive,
    doc_row_sum,
    doc_tail_sum,
    gamma_n,
    geometric_mesh,
    grigorieff_ratio_limit,
    orthogonality_defect,
    psd_min_eigenvalue,
    quadratic_form,
    random_mesh,
    ratio_profile,
    read_mesh_csv,
    run_convergence,
    run_stability_suite,
    s1_ratio_limit,
    solve_heat,
    theta_hat,
    uniform_mesh,
    write_mesh_csv,
    zero_stability_probe,
)

__all__ = [
    "Bdf2Kernels",
    "RatioProfile",
    "TimeMesh",
    "build_bdf2_kernels",
    "c_r_constant",
    "c_r_constant_of",
    "capped_random_mesh",
    "check_s1",
    "dahlquist_march",
    "doc_explicit",
    "doc_recursive",
    "doc_row_sum",
    "doc_tail_sum",
    "gamma_n",
    "geometric_mesh",
    "grigorieff_ratio_limit",
    "orthogonality_defect",
    "psd_min_eigenvalue",
    "quadratic_form",
    "random_mesh",
    "ratio_profile",
    "read_mesh_csv",
    "run_convergence",
    "run_stability_suite",
    "s1_ratio_limit",
    "solve_heat",
    "theta_hat",
    "uniform_mesh",
    "write_mesh_csv",
    "zero_stability_probe",
]

__version__ = "0.1.0"
