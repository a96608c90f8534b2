#pragma once

#include <string>

#include "oulevy/semigroup.hpp"

namespace oulevy {

// Named coefficient sequences for the diagonal infinite-dimensional model.
struct EigenSequence {
    double scale = 1.0;  // lambda_k = -scale * k^power
    double power = 2.0;
    double eval(int k) const;  // k >= 1
};

struct TraceClassSequence {
    enum class Kind { Geometric, Power };
    Kind kind = Kind::Geometric;
    double scale = 1.0;  // q_k = scale * ratio^k or scale * k^{-power}
    double ratio = 0.5;  // geometric
    double power = 2.0;  // power decay; must be > 1 for a finite trace
    double eval(int k) const;
    double declared_sum() const;
};

struct CoordinateSequence {
    double scale = 0.0;  // x_k = scale * k^{-power}; scale 0 = origin
    double power = 0.0;
    double eval(int k) const;
};

// Per-coordinate jump recipe: atoms of decaying weight w0 * decay^k placed at
// +-size e_k, or an isotropic stable measure over the truncated space.
struct NuRecipe {
    enum class Kind { None, AxisAtoms, IsotropicStable };
    Kind kind = Kind::None;
    double w0 = 1.0, decay = 0.5, size = 1.0;  // axis atoms
    double alpha = 0.5, c = 1.0, r_max = kInf;  // isotropic stable
};

// Diagonal trace-class model data: lambda_k, q_k, a_k plus a jump recipe.
class SpectralModel {
public:
    SpectralModel(EigenSequence eigen, TraceClassSequence q, CoordinateSequence a,
                  NuRecipe nu);

    const EigenSequence& eigen() const { return eigen_; }
    const TraceClassSequence& q() const { return q_; }
    const CoordinateSequence& a() const { return a_; }
    const NuRecipe& nu() const { return nu_; }

private:
    EigenSequence eigen_;
    TraceClassSequence q_;
    CoordinateSequence a_;
    NuRecipe nu_;
};

/// finite-rank realization: A = diag(lambda_1..lambda_d), Q = diag(q_1..q_d)
OUModel galerkin_project(const SpectralModel& sm, int d);

struct DimSweepRow {
    int d;
    double residual;
    double budget;
    bool converged;
};

struct DimSweepReport {
    std::vector<DimSweepRow> rows;
    bool x_in_domain_surrogate;  // sum |lambda_k x_k|^2 converges
    double max_residual = 0.0;
    double max_residual_change = 0.0;  // between consecutive dims
};

/// cauchy_residual across truncation dimensions d for a trig monomial with
/// finitely many active coordinates; x is the truncation of a fixed sequence
DimSweepReport dimension_sweep(const SpectralModel& sm, const CoordinateSequence& x,
                               const Vec& h_active, double t,
                               const std::vector<int>& dims,
                               const QuadOptions& opt = QuadOptions{1e-9, 1e-9, 4000});

}  // namespace oulevy
