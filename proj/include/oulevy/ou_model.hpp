#pragma once

#include <memory>

#include "oulevy/levy_triplet.hpp"
#include "oulevy/matrix_exp.hpp"
#include "oulevy/quadrature.hpp"

namespace oulevy {

// Drift matrix A plus driving-noise triplet: fully determines the OU process
// dX = AX dt + dZ, its marginal laws and the transition semigroup.
class OUModel {
public:
    OUModel(Mat a, LevyTriplet triplet);

    int dim() const { return dim_; }
    const Mat& a() const { return a_mat_; }
    const LevyTriplet& triplet() const { return triplet_; }
    const FlowPropagator& flow() const { return *flow_; }
    const FlowPropagator& adjoint_flow() const { return *adjoint_flow_; }

    /// e^{tA^T} h
    Vec adjoint_state(double t, const Vec& h) const { return adjoint_flow_->apply(t, h); }

    CharExponentResult psi(const Vec& u, const QuadOptions& opt = QuadOptions{
                                             1e-10, 1e-10, 4000}) const {
        return char_exponent(triplet_, u, opt);
    }

private:
    int dim_;
    Mat a_mat_;
    LevyTriplet triplet_;
    std::shared_ptr<FlowPropagator> flow_;
    std::shared_ptr<FlowPropagator> adjoint_flow_;
};

// Prefix integral Psi(s) = int_0^s psi(e^{rA^T} h) dr on [0, s_max]: a single
// adaptive pass fixes a partition, then arbitrary s cost one fresh panel.
class FlowExponentIntegral {
public:
    FlowExponentIntegral(const OUModel& model, Vec h, double s_max,
                         const QuadOptions& opt = QuadOptions{1e-10, 1e-10, 4000});

    Cplx value(double s) const;
    double error() const { return error_; }
    bool converged() const { return converged_; }
    double s_max() const { return s_max_; }

private:
    Cplx psi_at(double s) const;

    const OUModel* model_;
    Vec h_;
    double s_max_;
    QuadOptions opt_;
    std::vector<QuadPanel<Cplx>> panels_;
    std::vector<Cplx> prefix_;  // prefix_[i] = integral over panels [0, i)
    double error_ = 0.0;
    mutable double psi_error_ = 0.0;  // worst psi quadrature error seen
    bool converged_ = true;
};

struct MarginalCharResult {
    Cplx value{};
    double error = 0.0;
    bool converged = true;
};

/// characteristic function of the time-t marginal started at x, evaluated at h:
/// exp(i <e^{tA^T} h, x>) * exp(- int_0^t psi(e^{sA^T} h) ds)
MarginalCharResult marginal_char(const OUModel& model, double t, const Vec& x,
                                 const Vec& h,
                                 const QuadOptions& opt = QuadOptions{1e-10, 1e-10,
                                                                      4000});

}  // namespace oulevy
