#pragma once

#include <nlohmann/json.hpp>

#include "oulevy/ou_model.hpp"
#include "oulevy/spectral.hpp"
#include "oulevy/trig_polynomial.hpp"

namespace oulevy {

using Json = nlohmann::json;

// Levy measure / triplet / model / trig polynomial JSON vocabulary. Variants
// carry a "type" tag; r_max = null encodes an unbounded support.

Json measure_to_json(const LevyMeasureSpec& nu);
LevyMeasureSpec measure_from_json(const Json& j);

Json triplet_to_json(const LevyTriplet& t);
LevyTriplet triplet_from_json(const Json& j);

Json model_to_json(const OUModel& m);
OUModel model_from_json(const Json& j);

Json trig_to_json(const TrigPolynomial& p);
TrigPolynomial trig_from_json(const Json& j);

SpectralModel spectral_from_json(const Json& j);
Json spectral_to_json(const SpectralModel& sm);

/// field access with a path-to-field diagnostic on errors
const Json& require_field(const Json& j, const std::string& key,
                          const std::string& path);

Vec vec_from_json(const Json& j, const std::string& path);
Mat mat_from_json(const Json& j, const std::string& path);
Json vec_to_json(const Vec& v);
Json mat_to_json(const Mat& m);

}  // namespace oulevy
