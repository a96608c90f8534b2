#include "oulevy/serialization.hpp"

#include <stdexcept>

namespace oulevy {

const Json& require_field(const Json& j, const std::string& key,
                          const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument("config: missing field " + path + "/" + key);
    return j.at(key);
}

Vec vec_from_json(const Json& j, const std::string& path) {
    if (!j.is_array())
        throw std::invalid_argument("config: " + path + " must be an array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw std::invalid_argument("config: " + path + " must hold numbers");
        v[static_cast<int>(i)] = j[i].get<double>();
    }
    return v;
}

Mat mat_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("config: " + path + " must be a matrix (array of rows)");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw std::invalid_argument("config: " + path + " rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
    }
    return m;
}

Json vec_to_json(const Vec& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json mat_to_json(const Mat& m) {
    Json a = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        a.push_back(row);
    }
    return a;
}

namespace {

Json law_to_json(const JumpLaw& law) {
    if (const auto* g = std::get_if<GaussianLaw>(&law)) {
        return Json{{"type", "gaussian"},
                    {"mean", vec_to_json(g->mean)},
                    {"cov", mat_to_json(g->cov)}};
    }
    if (const auto* b = std::get_if<UniformBallLaw>(&law))
        return Json{{"type", "uniform_ball"}, {"radius", b->radius}};
    const auto& p = std::get<PointMassLaw>(law);
    return Json{{"type", "point_mass"}, {"point", vec_to_json(p.point)}};
}

JumpLaw law_from_json(const Json& j, const std::string& path) {
    const std::string type = require_field(j, "type", path).get<std::string>();
    if (type == "gaussian")
        return GaussianLaw{vec_from_json(require_field(j, "mean", path), path + "/mean"),
                           mat_from_json(require_field(j, "cov", path), path + "/cov")};
    if (type == "uniform_ball")
        return UniformBallLaw{require_field(j, "radius", path).get<double>()};
    if (type == "point_mass")
        return PointMassLaw{
            vec_from_json(require_field(j, "point", path), path + "/point")};
    throw std::invalid_argument("config: unknown jump law type at " + path);
}

}  // namespace

Json measure_to_json(const LevyMeasureSpec& nu) {
    struct V {
        const LevyMeasureSpec& spec;
        Json operator()(const FiniteAtomicSpec& s) const {
            if (s.atoms.empty()) return Json{{"type", "none"}, {"dim", spec.dim()}};
            Json atoms = Json::array();
            for (const auto& a : s.atoms)
                atoms.push_back(
                    Json{{"weight", a.weight}, {"point", vec_to_json(a.point)}});
            return Json{{"type", "finite_atomic"}, {"dim", spec.dim()}, {"atoms", atoms}};
        }
        Json operator()(const CompoundPoissonSpec& s) const {
            return Json{{"type", "compound_poisson"},
                        {"dim", spec.dim()},
                        {"rate", s.rate},
                        {"jump_law", law_to_json(s.law)}};
        }
        Json operator()(const TemperedStableSpec& s) const {
            return Json{{"type", "tempered_stable"},
                        {"alpha", s.alpha},
                        {"c_plus", s.c_plus},
                        {"c_minus", s.c_minus},
                        {"theta", s.theta}};
        }
        Json operator()(const IsotropicStableSpec& s) const {
            Json j{{"type", "isotropic_stable"},
                   {"dim", spec.dim()},
                   {"alpha", s.alpha},
                   {"c", s.c}};
            if (std::isfinite(s.r_max))
                j["r_max"] = s.r_max;
            else
                j["r_max"] = nullptr;
            return j;
        }
        Json operator()(const SuperpositionSpec& s) const {
            Json parts = Json::array();
            for (const auto& p : s.parts) parts.push_back(measure_to_json(p));
            return Json{{"type", "superposition"}, {"components", parts}};
        }
    };
    return std::visit(V{nu}, nu.node());
}

LevyMeasureSpec measure_from_json(const Json& j) {
    const std::string path = "nu";
    const std::string type = require_field(j, "type", path).get<std::string>();
    if (type == "none")
        return LevyMeasureSpec::empty(require_field(j, "dim", path).get<int>());
    if (type == "finite_atomic") {
        const int dim = require_field(j, "dim", path).get<int>();
        std::vector<FiniteAtomicSpec::Atom> atoms;
        for (const auto& a : require_field(j, "atoms", path))
            atoms.push_back(FiniteAtomicSpec::Atom{
                require_field(a, "weight", path + "/atoms").get<double>(),
                vec_from_json(require_field(a, "point", path + "/atoms"),
                              path + "/atoms/point")});
        return LevyMeasureSpec::finite_atomic(dim, std::move(atoms));
    }
    if (type == "compound_poisson") {
        const int dim = require_field(j, "dim", path).get<int>();
        return LevyMeasureSpec::compound_poisson(
            dim, require_field(j, "rate", path).get<double>(),
            law_from_json(require_field(j, "jump_law", path), path + "/jump_law"));
    }
    if (type == "tempered_stable")
        return LevyMeasureSpec::tempered_stable(
            require_field(j, "alpha", path).get<double>(),
            require_field(j, "c_plus", path).get<double>(),
            require_field(j, "c_minus", path).get<double>(),
            require_field(j, "theta", path).get<double>());
    if (type == "isotropic_stable") {
        const auto& rj = require_field(j, "r_max", path);
        const double r_max = rj.is_null() ? kInf : rj.get<double>();
        return LevyMeasureSpec::isotropic_stable(
            require_field(j, "dim", path).get<int>(),
            require_field(j, "alpha", path).get<double>(),
            require_field(j, "c", path).get<double>(), r_max);
    }
    if (type == "superposition") {
        std::vector<LevyMeasureSpec> parts;
        for (const auto& p : require_field(j, "components", path))
            parts.push_back(measure_from_json(p));
        return LevyMeasureSpec::superposition(std::move(parts));
    }
    throw std::invalid_argument("config: unknown measure type '" + type + "'");
}

Json triplet_to_json(const LevyTriplet& t) {
    return Json{{"dim", t.dim()},
                {"Q", mat_to_json(t.q())},
                {"a", vec_to_json(t.a())},
                {"nu", measure_to_json(t.nu())}};
}

LevyTriplet triplet_from_json(const Json& j) {
    return LevyTriplet(mat_from_json(require_field(j, "Q", "triplet"), "triplet/Q"),
                       vec_from_json(require_field(j, "a", "triplet"), "triplet/a"),
                       measure_from_json(require_field(j, "nu", "triplet")));
}

Json model_to_json(const OUModel& m) {
    return Json{{"A", mat_to_json(m.a())}, {"triplet", triplet_to_json(m.triplet())}};
}

OUModel model_from_json(const Json& j) {
    return OUModel(mat_from_json(require_field(j, "A", "model"), "model/A"),
                   triplet_from_json(require_field(j, "triplet", "model")));
}

Json trig_to_json(const TrigPolynomial& p) {
    Json terms = Json::array();
    for (const auto& t : p.terms())
        terms.push_back(Json{{"re", t.coeff.real()},
                             {"im", t.coeff.imag()},
                             {"freq", vec_to_json(t.freq)}});
    return Json{{"dim", p.dim()}, {"terms", terms}};
}

TrigPolynomial trig_from_json(const Json& j) {
    const int dim = require_field(j, "dim", "f").get<int>();
    std::vector<TrigPolynomial::Term> terms;
    for (const auto& t : require_field(j, "terms", "f"))
        terms.push_back(TrigPolynomial::Term{
            Cplx{require_field(t, "re", "f/terms").get<double>(),
                 t.contains("im") ? t.at("im").get<double>() : 0.0},
            vec_from_json(require_field(t, "freq", "f/terms"), "f/terms/freq")});
    return TrigPolynomial(dim, std::move(terms));
}

SpectralModel spectral_from_json(const Json& j) {
    EigenSequence eig;
    const auto& je = require_field(j, "eigen", "spectral");
    eig.scale = require_field(je, "scale", "spectral/eigen").get<double>();
    eig.power = require_field(je, "power", "spectral/eigen").get<double>();

    TraceClassSequence q;
    const auto& jq = require_field(j, "q", "spectral");
    const std::string kind = require_field(jq, "kind", "spectral/q").get<std::string>();
    if (kind == "geometric") {
        q.kind = TraceClassSequence::Kind::Geometric;
        q.ratio = require_field(jq, "ratio", "spectral/q").get<double>();
    } else if (kind == "power") {
        q.kind = TraceClassSequence::Kind::Power;
        q.power = require_field(jq, "power", "spectral/q").get<double>();
    } else {
        throw std::invalid_argument("config: spectral/q/kind must be geometric or power");
    }
    q.scale = require_field(jq, "scale", "spectral/q").get<double>();

    CoordinateSequence a;
    if (j.contains("a")) {
        a.scale = require_field(j.at("a"), "scale", "spectral/a").get<double>();
        a.power = require_field(j.at("a"), "power", "spectral/a").get<double>();
    }

    NuRecipe nu;
    if (j.contains("nu")) {
        const auto& jn = j.at("nu");
        const std::string nk = require_field(jn, "kind", "spectral/nu").get<std::string>();
        if (nk == "none") {
            nu.kind = NuRecipe::Kind::None;
        } else if (nk == "axis_atoms") {
            nu.kind = NuRecipe::Kind::AxisAtoms;
            nu.w0 = require_field(jn, "w0", "spectral/nu").get<double>();
            nu.decay = require_field(jn, "decay", "spectral/nu").get<double>();
            nu.size = require_field(jn, "size", "spectral/nu").get<double>();
        } else if (nk == "isotropic_stable") {
            nu.kind = NuRecipe::Kind::IsotropicStable;
            nu.alpha = require_field(jn, "alpha", "spectral/nu").get<double>();
            nu.c = require_field(jn, "c", "spectral/nu").get<double>();
            const auto& rj = require_field(jn, "r_max", "spectral/nu");
            nu.r_max = rj.is_null() ? kInf : rj.get<double>();
        } else {
            throw std::invalid_argument("config: unknown spectral/nu/kind '" + nk + "'");
        }
    }
    return SpectralModel(eig, q, a, nu);
}

Json spectral_to_json(const SpectralModel& sm) {
    Json j;
    j["eigen"] = Json{{"scale", sm.eigen().scale}, {"power", sm.eigen().power}};
    if (sm.q().kind == TraceClassSequence::Kind::Geometric)
        j["q"] = Json{{"kind", "geometric"}, {"scale", sm.q().scale},
                      {"ratio", sm.q().ratio}};
    else
        j["q"] = Json{{"kind", "power"}, {"scale", sm.q().scale},
                      {"power", sm.q().power}};
    j["a"] = Json{{"scale", sm.a().scale}, {"power", sm.a().power}};
    switch (sm.nu().kind) {
        case NuRecipe::Kind::None: j["nu"] = Json{{"kind", "none"}}; break;
        case NuRecipe::Kind::AxisAtoms:
            j["nu"] = Json{{"kind", "axis_atoms"},
                           {"w0", sm.nu().w0},
                           {"decay", sm.nu().decay},
                           {"size", sm.nu().size}};
            break;
        case NuRecipe::Kind::IsotropicStable:
            j["nu"] = Json{{"kind", "isotropic_stable"},
                           {"alpha", sm.nu().alpha},
                           {"c", sm.nu().c},
                           {"r_max", std::isfinite(sm.nu().r_max)
                                         ? Json(sm.nu().r_max)
                                         : Json(nullptr)}};
            break;
    }
    return j;
}

}  // namespace oulevy
