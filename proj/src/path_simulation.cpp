#include "oulevy/path_simulation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "oulevy/matrix_exp.hpp"

namespace oulevy {

OUPathStepper::OUPathStepper(const OUModel& model, const PathScheme& scheme)
    : model_(&model), scheme_(scheme), sampler_(model.triplet(), scheme.small_jumps) {}

const OUPathStepper::StepCache& OUPathStepper::cache_for(double dt) const {
    for (const auto& c : cache_)
        if (c.dt == dt) return c;
    StepCache c;
    c.dt = dt;
    c.transport = model_->flow().exp(dt);
    c.drift = flow_drift_integral(model_->a(), dt) * sampler_.compensated_drift();
    c.gauss_factor =
        psd_sqrt(flow_covariance(model_->a(), sampler_.effective_gauss_cov(), dt));
    cache_.push_back(std::move(c));
    return cache_.back();
}

void OUPathStepper::step(Vec& x, double t_abs, double dt, RngStream& rng,
                         std::vector<PathJump>* observed, double observe_above) const {
    const StepCache& c = cache_for(dt);
    const int d = model_->dim();
    Vec next = c.transport * x + c.drift + c.gauss_factor * rng.normal_vec(d);
    if (sampler_.jump_rate() > 0.0) {
        const std::uint64_t k = rng.poisson(sampler_.jump_rate() * dt);
        for (std::uint64_t i = 0; i < k; ++i) {
            const double s = rng.uniform(0.0, dt);
            const Vec y = sampler_.sample_jump(rng);
            const double ny = y.norm();
            if (observed != nullptr && ny > observe_above)
                observed->push_back(PathJump{t_abs + s, y});
            if (ny > scheme_.large_jump_trunc) continue;  // truncated process X^n
            next += model_->flow().apply(dt - s, y);
        }
    }
    x = next;
}

namespace {

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty() || grid.front() != 0.0)
        throw std::invalid_argument("path grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("path grid must be strictly increasing");
}

// One path over the whole grid; states_out has grid.size() x dim doubles.
void run_single_path(const OUPathStepper& stepper, const Vec& x0,
                     const std::vector<double>& grid, double max_step, RngStream& rng,
                     double* states_out, int dim, std::vector<PathJump>* jumps,
                     double observe_above) {
    Vec x = x0;
    for (int k = 0; k < dim; ++k) states_out[k] = x[k];
    for (std::size_t gi = 1; gi < grid.size(); ++gi) {
        const double span = grid[gi] - grid[gi - 1];
        const int n_sub = std::max(1, static_cast<int>(std::ceil(span / max_step - 1e-12)));
        const double dt = span / n_sub;
        double t = grid[gi - 1];
        for (int s = 0; s < n_sub; ++s) {
            stepper.step(x, t, dt, rng, jumps, observe_above);
            t += dt;
        }
        for (int k = 0; k < dim; ++k) states_out[gi * dim + k] = x[k];
    }
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

PathEnsemble simulate_paths(const OUModel& model, const Vec& x0,
                            const std::vector<double>& grid, int n_paths,
                            const PathScheme& scheme, std::uint64_t master_seed,
                            int threads) {
    validate_grid(grid);
    if (n_paths < 1) throw std::invalid_argument("simulate_paths: need at least one path");
    const int d = model.dim();
    PathEnsemble ens;
    ens.grid = grid;
    ens.n_paths = n_paths;
    ens.dim = d;
    ens.states.assign(static_cast<std::size_t>(n_paths) * grid.size() * d, 0.0);
    ens.meta.master_seed = master_seed;
    ens.meta.max_step = scheme.max_step;
    ens.meta.small_jump_cut = scheme.small_jumps.cut;
    ens.meta.large_jump_trunc = scheme.large_jump_trunc;
    ens.meta.x0 = x0;

    const int n_threads = resolve_threads(threads);
    std::atomic<int> next_path{0};
    auto worker = [&]() {
        OUPathStepper stepper(model, scheme);  // per-thread step cache
        while (true) {
            const int p = next_path.fetch_add(1);
            if (p >= n_paths) break;
            RngStream rng(master_seed, static_cast<std::uint64_t>(p));
            run_single_path(stepper, x0, grid, scheme.max_step, rng,
                            ens.states.data() +
                                static_cast<std::size_t>(p) * grid.size() * d,
                            d, nullptr, kInf);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return ens;
}

double PathReduction::std_error(std::size_t i) const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = mean(i);
    const double var = std::max(0.0, (sum_sq[i] - nn * m * m) / (nn - 1.0));
    return std::sqrt(var / nn);
}

PathReduction reduce_paths(const OUModel& model, const Vec& x0,
                           const std::vector<double>& grid, int n_paths,
                           const PathScheme& scheme, std::uint64_t master_seed,
                           int n_stats, const PathLeaf& leaf, int threads,
                           double collect_jumps_above) {
    validate_grid(grid);
    if (n_paths < 1) throw std::invalid_argument("reduce_paths: need at least one path");
    const int d = model.dim();
    const int n_threads = resolve_threads(threads);
    constexpr int kBlock = 512;
    const int n_blocks = (n_paths + kBlock - 1) / kBlock;

    std::vector<std::vector<double>> block_sum(n_blocks), block_sq(n_blocks);
    std::atomic<int> next_block{0};
    auto worker = [&]() {
        OUPathStepper stepper(model, scheme);
        std::vector<double> states(grid.size() * d);
        std::vector<double> stats(n_stats);
        std::vector<PathJump> jumps;
        const bool want_jumps = std::isfinite(collect_jumps_above);
        while (true) {
            const int b = next_block.fetch_add(1);
            if (b >= n_blocks) break;
            std::vector<double> sum(n_stats, 0.0), sq(n_stats, 0.0);
            const int lo = b * kBlock;
            const int hi = std::min(n_paths, lo + kBlock);
            for (int p = lo; p < hi; ++p) {
                RngStream rng(master_seed, static_cast<std::uint64_t>(p));
                jumps.clear();
                run_single_path(stepper, x0, grid, scheme.max_step, rng, states.data(),
                                d, want_jumps ? &jumps : nullptr, collect_jumps_above);
                leaf(states.data(), jumps, stats.data());
                for (int i = 0; i < n_stats; ++i) {
                    sum[i] += stats[i];
                    sq[i] += stats[i] * stats[i];
                }
            }
            block_sum[b] = std::move(sum);
            block_sq[b] = std::move(sq);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    PathReduction red;
    red.sum.assign(n_stats, 0.0);
    red.sum_sq.assign(n_stats, 0.0);
    red.n = static_cast<std::size_t>(n_paths);
    for (int b = 0; b < n_blocks; ++b)
        for (int i = 0; i < n_stats; ++i) {
            red.sum[i] += block_sum[b][i];
            red.sum_sq[i] += block_sq[b][i];
        }
    return red;
}

void PathEnsemble::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw std::runtime_error("write_csv: cannot open " + path);
    std::fprintf(f, "path_id,t");
    for (int k = 1; k <= dim; ++k) std::fprintf(f, ",x_%d", k);
    std::fprintf(f, "\n");
    for (int p = 0; p < n_paths; ++p)
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::fprintf(f, "%d,%.17g", p, grid[g]);
            for (int k = 0; k < dim; ++k)
                std::fprintf(f, ",%.17g", state(p, static_cast<int>(g), k));
            std::fprintf(f, "\n");
        }
    std::fclose(f);
}

void PathEnsemble::write_binary(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_binary: cannot open " + path);
    const char magic[8] = {'O', 'U', 'P', 'A', 'T', 'H', '0', '1'};
    f.write(magic, 8);
    const std::int64_t hdr[3] = {n_paths, static_cast<std::int64_t>(grid.size()), dim};
    f.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
    f.write(reinterpret_cast<const char*>(grid.data()),
            static_cast<std::streamsize>(grid.size() * sizeof(double)));
    f.write(reinterpret_cast<const char*>(states.data()),
            static_cast<std::streamsize>(states.size() * sizeof(double)));
}

}  // namespace oulevy
