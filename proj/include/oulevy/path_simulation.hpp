#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oulevy/increment_sampler.hpp"
#include "oulevy/ou_model.hpp"

namespace oulevy {

struct PathScheme {
    double max_step = 0.01;                 // exponential-Euler substep cap
    SmallJumpPolicy small_jumps{};          // epsilon and substitution mode
    double large_jump_trunc = kInf;         // discard jumps with |y| > n
};

struct PathJump {
    double t;  // absolute jump time
    Vec y;
};

// Exponential-Euler stepper: exact e^{dt A} transport, exact drift and
// Gaussian convolution covariance (Van Loan), compound-Poisson jumps placed
// uniformly inside the step and propagated by e^{(dt-s)A}.
class OUPathStepper {
public:
    OUPathStepper(const OUModel& model, const PathScheme& scheme);

    /// advance x over [t_abs, t_abs + dt]; observer (optional) sees every jump
    /// beyond observe_above *before* truncation
    void step(Vec& x, double t_abs, double dt, RngStream& rng,
              std::vector<PathJump>* observed = nullptr,
              double observe_above = kInf) const;

    const IncrementSampler& sampler() const { return sampler_; }

private:
    struct StepCache {
        double dt;
        Mat transport;     // e^{dt A}
        Vec drift;         // int_0^dt e^{sA} ds * compensated drift
        Mat gauss_factor;  // factor of int_0^dt e^{sA} C e^{sA^T} ds
    };
    const StepCache& cache_for(double dt) const;

    const OUModel* model_;
    PathScheme scheme_;
    IncrementSampler sampler_;
    mutable std::vector<StepCache> cache_;
};

struct PathEnsembleMeta {
    std::uint64_t master_seed = 0;
    double max_step = 0.0;
    double small_jump_cut = 0.0;
    double large_jump_trunc = kInf;
    std::string scheme = "exponential-euler";
    Vec x0;
};

struct PathEnsemble {
    std::vector<double> grid;    // increasing, starts at 0
    int n_paths = 0;
    int dim = 0;
    std::vector<double> states;  // [path][grid][dim] row-major
    PathEnsembleMeta meta;

    double state(int p, int g, int k) const {
        return states[(static_cast<std::size_t>(p) * grid.size() + g) * dim + k];
    }
    Vec state_vec(int p, int g) const {
        Vec v(dim);
        for (int k = 0; k < dim; ++k) v[k] = state(p, g, k);
        return v;
    }

    void write_csv(const std::string& path) const;
    void write_binary(const std::string& path) const;
};

/// Monte Carlo sample of OU trajectories on the grid; deterministic in
/// (master_seed) regardless of thread count.
PathEnsemble simulate_paths(const OUModel& model, const Vec& x0,
                            const std::vector<double>& grid, int n_paths,
                            const PathScheme& scheme, std::uint64_t master_seed,
                            int threads = 0);

// ---------------------------------------------------------------------------
// Deterministic parallel reduction over paths. The leaf callback fills
// `stats_out` (n_stats doubles) from one simulated path; the driver returns
// per-statistic sums and sums of squares accumulated in path order.
// ---------------------------------------------------------------------------

struct PathReduction {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    std::size_t n = 0;

    double mean(std::size_t i) const { return sum[i] / static_cast<double>(n); }
    double std_error(std::size_t i) const;
};

using PathLeaf = std::function<void(const double* states /* grid x dim */,
                                    const std::vector<PathJump>& jumps,
                                    double* stats_out)>;

PathReduction reduce_paths(const OUModel& model, const Vec& x0,
                           const std::vector<double>& grid, int n_paths,
                           const PathScheme& scheme, std::uint64_t master_seed,
                           int n_stats, const PathLeaf& leaf, int threads = 0,
                           double collect_jumps_above = kInf);

}  // namespace oulevy
