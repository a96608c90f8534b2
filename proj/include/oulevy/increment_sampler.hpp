#pragma once

#include "oulevy/levy_triplet.hpp"
#include "oulevy/rng.hpp"

namespace oulevy {

struct SmallJumpPolicy {
    enum class Mode { Auto, On, Off };
    double cut = 0.01;  // epsilon
    Mode mode = Mode::Auto;
};

// Samples increments of Z over dt through the Levy-Ito decomposition:
// drift, Gaussian part, compound-Poisson jumps beyond the cut minus their
// compensator, and (optionally) a Gaussian substitute for the small jumps.
// Finite-activity measures are sampled exactly (no cut, no substitution).
class IncrementSampler {
public:
    IncrementSampler(const LevyTriplet& triplet, SmallJumpPolicy policy = {});

    Vec sample(double dt, RngStream& rng) const;

    // pieces used by the OU path stepper
    double jump_rate() const { return jump_rate_; }           // nu({|y| > eps_eff})
    const Vec& compensated_drift() const { return drift_; }   // a - annulus compensator
    const Mat& effective_gauss_cov() const { return gauss_cov_; }  // Q (+ small-jump cov)
    Vec sample_jump(RngStream& rng) const;
    bool substitution_enabled() const { return substitution_; }
    double cut() const { return eps_eff_; }
    double substitution_bias_third_moment() const { return third_moment_; }
    const LevyTriplet& triplet() const { return triplet_; }

private:
    LevyTriplet triplet_;
    double eps_eff_ = 0.0;
    double jump_rate_ = 0.0;
    Vec drift_;
    Mat gauss_cov_;
    Mat gauss_factor_;  // L with L L^T = gauss_cov_
    bool substitution_ = false;
    double third_moment_ = 0.0;
    std::optional<RestrictedSampler> jump_sampler_;
};

}  // namespace oulevy
