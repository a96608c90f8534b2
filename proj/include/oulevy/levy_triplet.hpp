#pragma once

#include <Eigen/Dense>

#include "oulevy/levy_measure.hpp"

namespace oulevy {

// Characteristic data (Q, a, nu) of the driving noise. Q is symmetrized and
// eigenvalue-clamped at construction (tolerance 1e-12).
class LevyTriplet {
public:
    LevyTriplet(Mat q, Vec a, LevyMeasureSpec nu);

    static LevyTriplet gaussian(Mat q);                       // a = 0, no jumps
    static LevyTriplet pure_jump(LevyMeasureSpec nu);         // Q = 0, a = 0
    static LevyTriplet drift_only(Vec a);

    int dim() const { return dim_; }
    const Mat& q() const { return q_; }
    const Vec& a() const { return a_; }
    const LevyMeasureSpec& nu() const { return nu_; }
    bool has_jumps() const { return has_jumps_; }

private:
    int dim_;
    Mat q_;
    Vec a_;
    LevyMeasureSpec nu_;
    bool has_jumps_;
};

/// empty measure helper: a valid spec carrying zero jump activity is not
/// representable (weights must be positive), so triplets track jump presence
/// with a flag and this sentinel builds a triplet without jumps.
LevyTriplet make_triplet_no_jumps(Mat q, Vec a);

struct CharExponentResult {
    Cplx value{};
    double error = 0.0;
    bool converged = true;
};

/// Levy-Khintchine exponent psi(u); psi(0) = 0 exactly.
CharExponentResult char_exponent(const LevyTriplet& triplet, const Vec& u,
                                 const QuadOptions& opt = QuadOptions{1e-10, 1e-10, 4000});

}  // namespace oulevy
