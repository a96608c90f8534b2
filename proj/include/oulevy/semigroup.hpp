#pragma once

#include <string>

#include "oulevy/generator.hpp"
#include "oulevy/path_simulation.hpp"

namespace oulevy {

struct SemigroupValue {
    Cplx value{};
    double error = 0.0;
    bool converged = true;
};

/// P_t p(x) for trig polynomials, exactly: sum_k c_k * marginal_char(t, x, h_k)
SemigroupValue apply_Pt_trig(const OUModel& model, const TrigPolynomial& p, double t,
                             const Vec& x,
                             const QuadOptions& opt = QuadOptions{1e-10, 1e-10, 4000});

/// the trig image of P_s: frequency e^{sA^T} h, coefficient c e^{-int psi}
TrigPolynomial semigroup_trig_image(const OUModel& model, const TrigPolynomial& p,
                                    double s,
                                    const QuadOptions& opt = QuadOptions{1e-10, 1e-10,
                                                                         4000});

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    int n_paths = 0;
};

/// P_t f(x) by Monte Carlo over path endpoints
McEstimate apply_Pt_mc(const OUModel& model, const std::function<double(const Vec&)>& f,
                       double t, const Vec& x, int n_paths, std::uint64_t master_seed,
                       const PathScheme& scheme = {}, int threads = 0);

struct CauchyResidualReport {
    double residual = 0.0;  // |P_t p(x) - p(x) - int_0^t L0(P_s p)(x) ds|
    double budget = 0.0;    // accumulated quadrature error estimates
    Cplx semigroup_value{};
    Cplx integral_value{};
    bool converged = true;
};

/// the central identity: P_t p(x) = p(x) + int_0^t L0 (P_s p)(x) ds, evaluated
/// without spatial discretization (P_s maps trig monomials to trig monomials)
CauchyResidualReport cauchy_residual(const OUModel& model, const TrigPolynomial& p,
                                     double t, const Vec& x,
                                     const QuadOptions& opt = QuadOptions{1e-9, 1e-9,
                                                                          4000});

struct CommutationReport {
    double max_discrepancy = 0.0;
    double budget = 0.0;
    std::string method;  // "fourier-surrogate-1d" or "mollified-mc"
    std::string status;  // "pass" or "inconclusive"
    std::vector<double> left_values;
    std::vector<double> right_values;
};

/// L0 P_t f(x) vs P_t L0 f(x) on a compact-support bump, over an x grid
CommutationReport commutation_check(const OUModel& model, const SmoothFunction& bump,
                                    double t, const std::vector<Vec>& x_grid,
                                    int n_paths, std::uint64_t master_seed,
                                    const PathScheme& scheme = {}, int threads = 0);

struct TruncationGapRow {
    double level;       // n
    double gap;         // |E f(X^n_t) - E f(X_t)|
    double std_error;   // paired-difference standard error
    double bound;       // 2 t ||f||_0 nu({|y| > n})
    double mean_truncated;
    double mean_full;
};

struct TruncationGapTable {
    std::vector<TruncationGapRow> rows;
    int n_paths = 0;
};

/// paired-seed comparison of the truncated process X^n with the full one
TruncationGapTable ito_truncation_gap(const OUModel& model, const SmoothFunction& f,
                                      double t, const Vec& x,
                                      const std::vector<double>& levels, int n_paths,
                                      std::uint64_t master_seed,
                                      const PathScheme& scheme = {}, int threads = 0);

struct CoreIdentityReport {
    double residual_forward = 0.0;   // |P_t f - f - int_0^t P_s(L0 f) ds|
    double budget_forward = 0.0;
    double residual_two_forms = 0.0; // |int P_s(L0 f) ds - int L0(P_s f) ds|
    double budget_two_forms = 0.0;
    bool pass = false;
};

/// identity on compact-support C^2 functions plus the agreement of the two
/// integral forms (d = 1; the backward form uses a Fourier-inversion
/// surrogate of P_s f)
CoreIdentityReport core_identity_check(const OUModel& model, const SmoothFunction& bump,
                                       double t, const Vec& x, int n_paths,
                                       int snapshots, std::uint64_t master_seed,
                                       const PathScheme& scheme = {}, int threads = 0);

}  // namespace oulevy
