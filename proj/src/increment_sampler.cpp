#include "oulevy/increment_sampler.hpp"

#include <cmath>

#include "oulevy/matrix_exp.hpp"

namespace oulevy {

IncrementSampler::IncrementSampler(const LevyTriplet& triplet, SmallJumpPolicy policy)
    : triplet_(triplet) {
    const int d = triplet.dim();
    drift_ = triplet.a();
    gauss_cov_ = triplet.q();
    if (triplet.has_jumps()) {
        const auto& nu = triplet.nu();
        if (is_finite_activity(nu)) {
            eps_eff_ = 0.0;
            jump_rate_ = mass_above(nu, 0.0);
            drift_ -= mean_in_annulus(nu, 0.0, 1.0);
            substitution_ = false;
        } else {
            if (!(policy.cut > 0.0 && policy.cut <= 1.0))
                throw std::invalid_argument("IncrementSampler: cut must lie in (0, 1]");
            eps_eff_ = policy.cut;
            jump_rate_ = mass_above(nu, eps_eff_);
            drift_ -= mean_in_annulus(nu, eps_eff_, 1.0);
            const Mat small_cov = second_moment_below(nu, eps_eff_);
            const double sigma_eps =
                std::sqrt(Eigen::SelfAdjointEigenSolver<Mat>(small_cov)
                              .eigenvalues()
                              .maxCoeff());
            switch (policy.mode) {
                case SmallJumpPolicy::Mode::On: substitution_ = true; break;
                case SmallJumpPolicy::Mode::Off: substitution_ = false; break;
                case SmallJumpPolicy::Mode::Auto:
                    substitution_ = sigma_eps / eps_eff_ > 1.0;
                    break;
            }
            if (substitution_) {
                gauss_cov_ += small_cov;
                third_moment_ = third_abs_moment_below(nu, eps_eff_);
            }
        }
    }
    gauss_factor_ = psd_sqrt(gauss_cov_);
    if (jump_rate_ > 0.0) jump_sampler_.emplace(triplet_.nu(), eps_eff_);
    (void)d;
}

Vec IncrementSampler::sample_jump(RngStream& rng) const {
    if (!jump_sampler_)
        throw std::runtime_error("IncrementSampler: no jump activity to sample");
    return jump_sampler_->sample(rng);
}

Vec IncrementSampler::sample(double dt, RngStream& rng) const {
    if (!(dt > 0.0)) throw std::invalid_argument("IncrementSampler: dt must be > 0");
    const int d = triplet_.dim();
    Vec z = drift_ * dt;
    z += std::sqrt(dt) * (gauss_factor_ * rng.normal_vec(d));
    if (jump_rate_ > 0.0) {
        const std::uint64_t k = rng.poisson(jump_rate_ * dt);
        for (std::uint64_t i = 0; i < k; ++i) z += sample_jump(rng);
    }
    return z;
}

}  // namespace oulevy
