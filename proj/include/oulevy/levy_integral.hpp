#pragma once

#include <functional>
#include <optional>

#include "oulevy/levy_measure.hpp"
#include "oulevy/quadrature.hpp"

namespace oulevy {

// Compensated integrand g with g(y) = O(|y|^2) near the origin. The caller
// supplies the compensated form; the integral module never differentiates
// user functions itself. The optional metadata drives tail handling:
//   * limit_at_infinity / limit_radius: g is exactly equal to the limit for
//     |y| >= limit_radius (compactly supported f shifted by x),
//   * osc_hint: dominant oscillation frequency of g along rays, which enables
//     cycle-summed tails for heavy-tailed measures,
//   * sup_bound: |g(y)| bound for |y| > 1, used for truncation error bounds.
struct CompensatedIntegrand {
    std::function<double(const Vec&)> g;
    double sup_bound = 1.0;
    std::optional<double> limit_at_infinity;
    double limit_radius = 0.0;
    std::optional<double> osc_hint;
};

struct LevyIntegralResult {
    double value = 0.0;
    double error = 0.0;
    double inner = 0.0, annulus = 0.0, tail = 0.0;
    double inner_error = 0.0, annulus_error = 0.0, tail_error = 0.0;
    bool converged = true;
    bool tail_truncated = false;       // heavy tail cut at finite radius
    double tail_truncation_bound = 0.0;  // mass-based bound on what was dropped
};

/// int g dnu with the region split |y| <= eps (inner shell), eps < |y| <= 1
/// (annulus), |y| > 1 (tail); per-region error estimates are summed.
LevyIntegralResult levy_integral(const LevyMeasureSpec& nu,
                                 const CompensatedIntegrand& gi, double split_radius,
                                 const QuadOptions& opt = QuadOptions{1e-9, 1e-7, 4000});

}  // namespace oulevy
