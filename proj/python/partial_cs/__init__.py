# Copyright 2026 The partial_cs Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Partially sparse recovery: solvers, certificates and experiments."""

from partial_cs._core import (
    PcsError,
    best_s_term_error,
    compare_full_vs_partial,
    gaussian_matrix,
    gaussian_sample_bound,
    mixed_rip_constant,
    noise_on_ball,
    nsp_check,
    partial_nsp_check,
    partial_rip_constant,
    phase_diagram,
    planted_signal,
    recover,
    reduce_problem,
    rip_constant,
    solve_l1,
    verify_noisy_bounds,
)

__all__ = [
    "PcsError",
    "best_s_term_error",
    "compare_full_vs_partial",
    "gaussian_matrix",
    "gaussian_sample_bound",
    "mixed_rip_constant",
    "noise_on_ball",
    "nsp_check",
    "partial_nsp_check",
    "partial_rip_constant",
    "phase_diagram",
    "planted_signal",
    "recover",
    "reduce_problem",
    "rip_constant",
    "solve_l1",
    "verify_noisy_bounds",
]
