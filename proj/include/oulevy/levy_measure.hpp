#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "oulevy/quadrature.hpp"
#include "oulevy/rng.hpp"

namespace oulevy {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Jump laws for the compound-Poisson variant
// ---------------------------------------------------------------------------

struct GaussianLaw {
    Vec mean;
    Mat cov;  // symmetric PSD
};

struct UniformBallLaw {
    double radius;  // centered ball
};

struct PointMassLaw {
    Vec point;
};

using JumpLaw = std::variant<GaussianLaw, UniformBallLaw, PointMassLaw>;

// ---------------------------------------------------------------------------
// Levy measure variants
// ---------------------------------------------------------------------------

class LevyMeasureSpec;

struct FiniteAtomicSpec {
    struct Atom {
        double weight;
        Vec point;  // never the origin
    };
    std::vector<Atom> atoms;
};

struct CompoundPoissonSpec {
    double rate;
    JumpLaw law;
};

// d = 1 only: density c+ e^{-theta y} y^{-1-alpha} on y > 0 and the mirror
// image with c- on y < 0.
struct TemperedStableSpec {
    double alpha;
    double c_plus;
    double c_minus;
    double theta;
};

// density c |y|^{-d-alpha} on 0 < |y| <= r_max (r_max may be +inf)
struct IsotropicStableSpec {
    double alpha;
    double c;
    double r_max;
};

struct SuperpositionSpec {
    std::vector<LevyMeasureSpec> parts;
};

using MeasureNode = std::variant<FiniteAtomicSpec, CompoundPoissonSpec,
                                 TemperedStableSpec, IsotropicStableSpec,
                                 SuperpositionSpec>;

// Validated Levy jump measure on R^d: nu({0}) = 0 by construction and
// int (1 ^ |y|^2) nu(dy) < inf is checked numerically at construction.
class LevyMeasureSpec {
public:
    /// the zero measure (no jumps): an atomic spec with an empty atom list
    static LevyMeasureSpec empty(int dim);
    static LevyMeasureSpec finite_atomic(int dim,
                                         std::vector<FiniteAtomicSpec::Atom> atoms);
    static LevyMeasureSpec compound_poisson(int dim, double rate, JumpLaw law);
    static LevyMeasureSpec tempered_stable(double alpha, double c_plus, double c_minus,
                                           double theta);
    static LevyMeasureSpec isotropic_stable(int dim, double alpha, double c,
                                            double r_max = kInf);
    static LevyMeasureSpec superposition(std::vector<LevyMeasureSpec> parts);

    int dim() const { return dim_; }
    const MeasureNode& node() const { return node_; }
    bool has_first_moment() const { return has_first_moment_; }
    double small_square_mass() const { return small_square_mass_; }

    std::string variant_name() const;

private:
    LevyMeasureSpec(int dim, MeasureNode node);

    int dim_ = 1;
    MeasureNode node_;
    bool has_first_moment_ = true;
    double small_square_mass_ = 0.0;
};

struct LevyMeasureReport {
    double small_square_mass = 0.0;   // int (1 ^ |y|^2) dnu
    double small_square_error = 0.0;
    double tail_first_moment = 0.0;   // int_{|y|>1} |y| dnu (inf when divergent)
    double tail_first_error = 0.0;
    bool tail_first_infinite = false;
    bool has_first_moment = true;
};

LevyMeasureReport check_levy_measure(const LevyMeasureSpec& nu);

// ---------------------------------------------------------------------------
// Scalar functionals of the measure (closed form where available, adaptive
// quadrature otherwise). Radii are Euclidean.
// ---------------------------------------------------------------------------

/// nu({|y| > r}), finite for every r > 0.
double mass_above(const LevyMeasureSpec& nu, double r);

/// int_{r0 < |y| <= r1} y nu(dy)
Vec mean_in_annulus(const LevyMeasureSpec& nu, double r0, double r1);

/// int_{|y| <= r} y y^T nu(dy)
Mat second_moment_below(const LevyMeasureSpec& nu, double r);

/// upper bound for int_{|y| <= r} |y|^3 nu(dy) (Gaussian-substitution bias control)
double third_abs_moment_below(const LevyMeasureSpec& nu, double r);

/// int_{|y| > 1} |y| nu(dy); +inf when divergent
double tail_first_moment(const LevyMeasureSpec& nu);

/// true when the measure is invariant under y -> -y (structural check)
bool is_symmetric(const LevyMeasureSpec& nu);

/// total mass finite (atomic / compound-Poisson measures)
bool is_finite_activity(const LevyMeasureSpec& nu);

/// smallest radius R with a closed-form bound nu({|y| > R}) <= budget;
/// returns +inf when the support is bounded by r <= R already.
double truncation_radius(const LevyMeasureSpec& nu, double mass_budget);

/// radius beyond which the measure vanishes (+inf for unbounded support)
double support_radius(const LevyMeasureSpec& nu);

/// one draw from nu restricted to {|y| > r}, normalized
Vec sample_above(const LevyMeasureSpec& nu, double r, RngStream& rng);

/// true for the zero measure
bool is_empty(const LevyMeasureSpec& nu);

/// prepared sampler for nu restricted to {|y| > r}: all masses, factorizations
/// and mixture weights are fixed at construction
class RestrictedSampler {
public:
    RestrictedSampler(const LevyMeasureSpec& nu, double r);
    Vec sample(RngStream& rng) const;

private:
    struct Node;
    std::shared_ptr<const Node> root_;
};

// law helpers (exposed for the sampler and tests)
double law_mass_above(const JumpLaw& law, int dim, double r);
Vec law_sample(const JumpLaw& law, int dim, RngStream& rng);

}  // namespace oulevy
