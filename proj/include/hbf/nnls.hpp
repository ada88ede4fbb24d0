// SPDX-License-Identifier: Apache-2.0
//
// Non-negative least squares
//
//   minimize ||B x + zeta * 1 - q||^2  subject to  x >= 0
//
// solved with the Lawson-Hanson active-set method. The unconstrained
// subproblems on the passive set are solved through a Cholesky factorization
// of the Gram submatrix, followed by one refinement step against the
// residual, so the cost per iteration does not grow with the number of
// measurements.

#pragma once

#include <vector>

#include "hbf/types.hpp"

namespace hbf {

struct NnlsOptions {
    // KKT tolerance relative to ||B^T (q - zeta)||_inf.
    double tolerance = 1e-8;
    int max_iterations = 500;
    // When set, receives the objective after every accepted iterate.
    std::vector<double>* objective_trace = nullptr;
};

struct NnlsResult {
    RVector x;
    double objective = 0.0;
    // Largest KKT violation, scaled like the tolerance.
    double kkt_violation = 0.0;
    int iterations = 0;
    bool converged = false;
};

NnlsResult nnls(const RMatrix& design, const RVector& measurements, double offset = 0.0,
                const NnlsOptions& options = {});

// Scaled KKT violation of a candidate point:
//   max over i of |g_i| where x_i > 0, and max(0, -g_i) where x_i = 0,
// with g = B^T (B x + zeta - q) / ||B^T (q - zeta)||_inf.
double nnls_kkt_violation(const RMatrix& design, const RVector& measurements, double offset,
                          const RVector& x);

double nnls_objective(const RMatrix& design, const RVector& measurements, double offset,
                      const RVector& x);

} // namespace hbf
