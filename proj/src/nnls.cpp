// SPDX-License-Identifier: Apache-2.0

#include "hbf/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace hbf {

namespace {

double kkt_scale(const RVector& correlation)
{
    const double s = correlation.size() ? correlation.cwiseAbs().maxCoeff() : 0.0;
    return s > 0.0 ? s : 1.0;
}

// Least squares restricted to the passive columns, via the Gram submatrix.
RVector solve_passive(const RMatrix& design, const RVector& target, const RMatrix& gram,
                      const RVector& correlation, const std::vector<int>& passive)
{
    const int k = static_cast<int>(passive.size());
    RMatrix g(k, k);
    RVector rhs(k);
    RMatrix cols(design.rows(), k);
    for (int a = 0; a < k; ++a) {
        rhs(a) = correlation(passive[a]);
        cols.col(a) = design.col(passive[a]);
        for (int b = 0; b < k; ++b)
            g(a, b) = gram(passive[a], passive[b]);
    }
    Eigen::LLT<RMatrix> llt(g);
    if (llt.info() != Eigen::Success)
        return cols.completeOrthogonalDecomposition().solve(target);
    RVector s = llt.solve(rhs);
    // One step of iterative refinement against the true residual.
    s += llt.solve(cols.transpose() * (target - cols * s));
    return s;
}

} // namespace

double nnls_objective(const RMatrix& design, const RVector& measurements, double offset,
                      const RVector& x)
{
    return (design * x - (measurements.array() - offset).matrix()).squaredNorm();
}

double nnls_kkt_violation(const RMatrix& design, const RVector& measurements, double offset,
                          const RVector& x)
{
    const RVector target = (measurements.array() - offset).matrix();
    const double scale = kkt_scale(design.transpose() * target);
    const RVector grad = design.transpose() * (design * x - target) / scale;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        worst = std::max(worst, x(i) > 0.0 ? std::abs(grad(i)) : std::max(0.0, -grad(i)));
    return worst;
}

NnlsResult nnls(const RMatrix& design, const RVector& measurements, double offset,
                const NnlsOptions& options)
{
    if (design.rows() != measurements.size())
        throw DimensionError("nnls: design has " + std::to_string(design.rows()) +
                             " rows but there are " + std::to_string(measurements.size()) +
                             " measurements");
    const int n = static_cast<int>(design.cols());
    const RVector target = (measurements.array() - offset).matrix();
    const RMatrix gram = design.transpose() * design;
    const RVector correlation = design.transpose() * target;
    const double threshold = options.tolerance * kkt_scale(correlation);

    NnlsResult result;
    RVector x = RVector::Zero(n);
    std::vector<char> in_passive(n, 0);
    std::vector<char> blocked(n, 0);
    std::vector<int> passive;
    RVector w = correlation;
    int iter = 0;

    while (iter < options.max_iterations) {
        int enter = -1;
        double best = threshold;
        for (int i = 0; i < n; ++i) {
            if (!in_passive[i] && !blocked[i] && w(i) > best) {
                best = w(i);
                enter = i;
            }
        }
        if (enter < 0) {
            result.converged = true;
            break;
        }
        passive.push_back(enter);
        in_passive[enter] = 1;

        bool first_pass = true;
        while (iter < options.max_iterations) {
            ++iter;
            const RVector s = solve_passive(design, target, gram, correlation, passive);
            const int k = static_cast<int>(passive.size());

            if (first_pass && s(k - 1) <= 0.0) {
                // The entering column does not improve the fit numerically.
                passive.pop_back();
                in_passive[enter] = 0;
                blocked[enter] = 1;
                break;
            }
            first_pass = false;

            if ((s.array() > 0.0).all()) {
                for (int a = 0; a < k; ++a)
                    x(passive[a]) = s(a);
                std::fill(blocked.begin(), blocked.end(), 0);
                break;
            }

            double alpha = std::numeric_limits<double>::infinity();
            int leaving = -1;
            for (int a = 0; a < k; ++a) {
                if (s(a) <= 0.0) {
                    const double xi = x(passive[a]);
                    const double ratio = xi / (xi - s(a));
                    if (ratio < alpha) {
                        alpha = ratio;
                        leaving = a;
                    }
                }
            }
            for (int a = 0; a < k; ++a) {
                const int i = passive[a];
                x(i) += alpha * (s(a) - x(i));
            }
            x(passive[leaving]) = 0.0;
            std::vector<int> kept;
            kept.reserve(k);
            for (int i : passive) {
                if (x(i) > 0.0) {
                    kept.push_back(i);
                } else {
                    x(i) = 0.0;
                    in_passive[i] = 0;
                }
            }
            passive.swap(kept);
            std::fill(blocked.begin(), blocked.end(), 0);
        }
        if (options.objective_trace)
            options.objective_trace->push_back(nnls_objective(design, measurements, offset, x));
        w = correlation - gram * x;
    }

    result.x = std::move(x);
    result.iterations = iter;
    result.objective = nnls_objective(design, measurements, offset, result.x);
    result.kkt_violation = nnls_kkt_violation(design, measurements, offset, result.x);
    if (result.kkt_violation > options.tolerance)
        result.converged = false;
    return result;
}

} // namespace hbf
