#include "wfpp/config_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace wfpp {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.push_back("");
    return parts;
}

[[noreturn]] void invalid(const std::string& message) {
    throw ConfigError("config.invalid", message);
}

std::string joined_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) invalid("expected an object at '" + prefix + "'");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok)
            throw ConfigError("config.unknown_key",
                              "unknown key \"" + joined_path(prefix, item.key()) + "\"");
    }
}

double get_number(const json& obj, const std::string& prefix, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) invalid("'" + joined_path(prefix, key) + "' must be a number");
    return v.get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& prefix, const char* key,
                         std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) invalid("'" + joined_path(prefix, key) + "' must be an integer");
    return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& prefix, const char* key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) invalid("'" + joined_path(prefix, key) + "' must be a string");
    return v.get<std::string>();
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config.parse", e.what());
    }
}

AlphaWeight parse_weight(const json& w, const std::string& prefix, int dim) {
    check_keys(w, prefix,
               {"alpha", "profile", "cylinder", "kappa_lower", "kappa_upper", "lipschitz"});
    if (!w.contains("alpha")) invalid("'" + prefix + ".alpha' is required");
    double alpha = get_number(w, prefix, "alpha", 0.0);

    if (w.contains("cylinder")) {
        if (w.contains("profile"))
            invalid("'" + prefix + "': give either profile or cylinder, not both");
        const json& c = w.at("cylinder");
        std::string cp = prefix + ".cylinder";
        check_keys(c, cp, {"aspect", "kappa_upper", "kappa_lower", "taper_power"});
        CylinderSpec spec = default_cylinder(dim, get_number(c, cp, "aspect", 2.0), 1.0);
        AdmissibleProfile profile;
        profile.kappa_upper_s = get_number(c, cp, "kappa_upper", 1.0);
        profile.kappa_lower_s = get_number(c, cp, "kappa_lower", profile.kappa_upper_s);
        profile.taper_power = get_number(c, cp, "taper_power", 2.0);
        try {
            return cylinder_weight(spec, profile, alpha);
        } catch (const std::exception& e) {
            invalid(std::string("'" + prefix + ".cylinder': ") + e.what());
        }
    }

    SphereProfile profile;
    try {
        profile = parse_profile(get_string(w, prefix, "profile", "const:1"), dim);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        invalid(std::string("'" + prefix + ".profile': ") + e.what());
    }
    try {
        if (w.contains("kappa_lower") || w.contains("kappa_upper") || w.contains("lipschitz")) {
            double kl = get_number(w, prefix, "kappa_lower", 0.0);
            double ku = get_number(w, prefix, "kappa_upper", 0.0);
            double lip = get_number(w, prefix, "lipschitz", 0.0);
            if (!w.contains("kappa_lower") || !w.contains("kappa_upper") ||
                !w.contains("lipschitz"))
                invalid("'" + prefix + "': declared bounds need all of kappa_lower, kappa_upper, "
                        "lipschitz");
            return AlphaWeight(alpha, profile, kl, ku, lip);
        }
        return AlphaWeight(alpha, profile);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        invalid(std::string("'" + prefix + "': ") + e.what());
    }
}

StopRule parse_stop(const json& s, const std::string& prefix, int dim) {
    check_keys(s, prefix, {"edges", "time", "euclid_radius", "norm_radius", "norm", "vertex_hit"});
    int rules = int(s.contains("edges")) + int(s.contains("time")) +
                int(s.contains("euclid_radius")) + int(s.contains("norm_radius")) +
                int(s.contains("vertex_hit"));
    if (rules != 1)
        invalid("'" + prefix + "' needs exactly one of edges, time, euclid_radius, norm_radius, "
                "vertex_hit");
    if (s.contains("norm") && !s.contains("norm_radius"))
        invalid("'" + prefix + ".norm' only applies to norm_radius");
    if (s.contains("edges")) {
        std::int64_t n = get_integer(s, prefix, "edges", 0);
        if (n < 1) invalid("'" + prefix + ".edges' must be >= 1");
        return StopRule::edges(std::uint64_t(n));
    }
    if (s.contains("time")) return StopRule::at_time(get_number(s, prefix, "time", 0.0));
    if (s.contains("euclid_radius"))
        return StopRule::euclid_radius(get_number(s, prefix, "euclid_radius", 0.0));
    if (s.contains("norm_radius")) {
        Norm nu = parse_norm(get_string(s, prefix, "norm", "euclidean"), dim);
        return StopRule::norm_radius(get_number(s, prefix, "norm_radius", 0.0), nu);
    }
    const json& vh = s.at("vertex_hit");
    if (!vh.is_array() || vh.size() != std::size_t(dim))
        invalid("'" + prefix + ".vertex_hit' must be an array of dim integers");
    Vertex v{};
    for (int i = 0; i < dim; ++i) {
        if (!vh[i].is_number_integer())
            invalid("'" + prefix + ".vertex_hit' must be an array of dim integers");
        v.c[i] = vh[i].get<std::int32_t>();
    }
    return StopRule::vertex_hit(v);
}

RunConfig run_config_from_json(const json& doc, const std::string& prefix) {
    check_keys(doc, prefix,
               {"dim", "seed", "weight", "stop", "snapshots", "vertex_cap", "root"});
    RunConfig cfg;
    std::int64_t dim = get_integer(doc, prefix, "dim", 2);
    if (dim < 1 || dim > kMaxDim) invalid("'" + joined_path(prefix, "dim") + "' must be in 1..4");
    cfg.dim = int(dim);
    std::int64_t seed = get_integer(doc, prefix, "seed", 1);
    cfg.seed = std::uint64_t(seed);
    std::int64_t cap = get_integer(doc, prefix, "vertex_cap", std::int64_t(cfg.vertex_cap));
    if (cap < 1) invalid("'" + joined_path(prefix, "vertex_cap") + "' must be >= 1");
    cfg.vertex_cap = std::uint64_t(cap);

    if (doc.contains("root")) {
        const json& root = doc.at("root");
        if (!root.is_array() || root.size() != std::size_t(cfg.dim))
            invalid("'" + joined_path(prefix, "root") + "' must be an array of dim integers");
        for (int i = 0; i < cfg.dim; ++i) {
            if (!root[i].is_number_integer())
                invalid("'" + joined_path(prefix, "root") + "' must be an array of dim integers");
            cfg.root.c[i] = root[i].get<std::int32_t>();
        }
    }

    if (doc.contains("weight"))
        cfg.weight = parse_weight(doc.at("weight"), joined_path(prefix, "weight"), cfg.dim);

    if (doc.contains("stop"))
        cfg.stop = parse_stop(doc.at("stop"), joined_path(prefix, "stop"), cfg.dim);

    if (doc.contains("snapshots")) {
        const json& sn = doc.at("snapshots");
        std::string sp = joined_path(prefix, "snapshots");
        check_keys(sn, sp, {"steps", "times"});
        if (sn.contains("steps")) {
            for (const json& v : sn.at("steps")) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                    invalid("'" + sp + ".steps' must be nonnegative integers");
                cfg.snapshots.at_steps.push_back(v.get<std::uint64_t>());
            }
        }
        if (sn.contains("times")) {
            for (const json& v : sn.at("times")) {
                if (!v.is_number()) invalid("'" + sp + ".times' must be numbers");
                cfg.snapshots.at_times.push_back(v.get<double>());
            }
        }
    }
    return cfg;
}

}  // namespace

Norm parse_norm(const std::string& text, int dim) {
    std::vector<std::string> parts = split(text, ':');
    if (parts.empty()) invalid("empty norm spec");
    try {
        if (parts[0] == "euclidean" && parts.size() == 1) return Norm::euclidean(dim);
        if (parts[0] == "l1" && parts.size() == 1) return Norm::l1(dim);
        if (parts[0] == "linf" && parts.size() == 1) return Norm::linf(dim);
        if (parts[0] == "scaled" && parts.size() >= 3) {
            double factor = std::stod(parts[1]);
            std::string base = parts[2];
            for (std::size_t i = 3; i < parts.size(); ++i) base += ":" + parts[i];
            return Norm::scaled(parse_norm(base, dim), factor);
        }
        if (parts[0] == "shape" && parts.size() == 2) {
            if (dim != 2) invalid("norm 'shape:' needs dimension 2");
            return norm_from_shape(load_shape_csv_2d(parts[1]));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        invalid("norm '" + text + "': " + e.what());
    }
    invalid("unrecognized norm '" + text +
            "' (want euclidean | l1 | linf | scaled:<factor>:<base> | shape:<path>)");
}

SphereProfile parse_profile(const std::string& text, int dim) {
    std::vector<std::string> parts = split(text, ':');
    if (parts.empty()) invalid("empty profile spec");
    try {
        if (parts[0] == "const" && parts.size() == 2)
            return SphereProfile::constant(dim, std::stod(parts[1]));
        if (parts[0] == "normpow" && parts.size() >= 3) {
            double scale = 1.0;
            std::size_t norm_end = parts.size() - 1;
            // Trailing numeric fields are <power>[:<scale>]; the rest is the norm.
            double power;
            std::size_t pos;
            const std::string& last = parts.back();
            power = std::stod(last, &pos);
            if (pos != last.size()) invalid("profile '" + text + "': bad power");
            if (parts.size() >= 4) {
                try {
                    std::size_t p2;
                    double maybe_power = std::stod(parts[parts.size() - 2], &p2);
                    if (p2 == parts[parts.size() - 2].size()) {
                        scale = power;
                        power = maybe_power;
                        norm_end = parts.size() - 2;
                    }
                } catch (const std::invalid_argument&) {
                }
            }
            std::string base = parts[1];
            for (std::size_t i = 2; i < norm_end; ++i) base += ":" + parts[i];
            return SphereProfile::norm_power(parse_norm(base, dim), power, scale);
        }
        if (parts[0] == "tab" && parts.size() == 2) {
            if (dim != 2) invalid("profile 'tab:' needs dimension 2");
            TabulatedShape2D shape = load_shape_csv_2d(parts[1]);
            return SphereProfile::tabulated2d(shape.angles, shape.radii);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        invalid("profile '" + text + "': " + e.what());
    }
    invalid("unrecognized profile '" + text +
            "' (want const:<v> | normpow:<norm>:<power>[:<scale>] | tab:<path>)");
}

RunConfig parse_run_config(const std::string& json_text) {
    return run_config_from_json(parse_document(json_text), "");
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
    json doc = parse_document(json_text);
    check_keys(doc, "",
               {"kind", "engine", "replicates", "times", "annuli", "covering_factor",
                "edges_per_run", "tail_fraction", "tail_threshold", "cone", "urn_steps",
                "direction_bins", "shape_time", "reference_mu", "output_dir"});
    ExperimentSpec spec;
    spec.kind = get_string(doc, "", "kind", "");
    if (spec.kind.empty()) invalid("'kind' is required");
    if (doc.contains("engine")) spec.engine_config = run_config_from_json(doc.at("engine"), "engine");
    spec.replicates = int(get_integer(doc, "", "replicates", spec.replicates));
    if (doc.contains("times")) {
        for (const json& v : doc.at("times")) {
            if (!v.is_number()) invalid("'times' must be numbers");
            spec.times.push_back(v.get<double>());
        }
    }
    if (doc.contains("annuli")) {
        for (const json& v : doc.at("annuli")) {
            if (!v.is_number_integer()) invalid("'annuli' must be integers");
            spec.annuli.push_back(v.get<int>());
        }
    }
    spec.covering_factor = get_number(doc, "", "covering_factor", spec.covering_factor);
    spec.edges_per_run =
        std::uint64_t(get_integer(doc, "", "edges_per_run", std::int64_t(spec.edges_per_run)));
    spec.tail_fraction = get_number(doc, "", "tail_fraction", spec.tail_fraction);
    spec.tail_threshold = get_number(doc, "", "tail_threshold", spec.tail_threshold);
    if (doc.contains("cone")) {
        const json& c = doc.at("cone");
        check_keys(c, "cone", {"alpha", "aspect", "kappa_upper", "kappa_lower", "taper_power"});
        spec.cone.alpha = get_number(c, "cone", "alpha", spec.cone.alpha);
        spec.cone.aspect = get_number(c, "cone", "aspect", spec.cone.aspect);
        spec.cone.kappa_upper = get_number(c, "cone", "kappa_upper", spec.cone.kappa_upper);
        spec.cone.kappa_lower = get_number(c, "cone", "kappa_lower", spec.cone.kappa_lower);
        spec.cone.taper_power = get_number(c, "cone", "taper_power", spec.cone.taper_power);
    }
    spec.urn_steps = int(get_integer(doc, "", "urn_steps", spec.urn_steps));
    spec.direction_bins = int(get_integer(doc, "", "direction_bins", spec.direction_bins));
    spec.shape_time = get_number(doc, "", "shape_time", spec.shape_time);
    if (doc.contains("reference_mu"))
        spec.reference_mu =
            parse_norm(get_string(doc, "", "reference_mu", "euclidean"), spec.engine_config.dim);
    spec.output_dir = get_string(doc, "", "output_dir", "");
    try {
        validate_experiment_spec(spec);
    } catch (const std::exception& e) {
        invalid(e.what());
    }
    return spec;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config.not_found", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides) {
    json doc = parse_document(json_text);
    for (const std::string& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            invalid("override '" + ov + "' is not of the form key=value");
        std::string path = ov.substr(0, eq);
        std::string value = ov.substr(eq + 1);
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value;  // bare strings like const:1
        }
        json* node = &doc;
        std::vector<std::string> keys = split(path, '.');
        for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
            if (keys[i].empty()) invalid("override '" + ov + "' has an empty path segment");
            if (!node->is_object()) invalid("override '" + ov + "' descends into a non-object");
            node = &(*node)[keys[i]];
            if (node->is_null()) *node = json::object();
        }
        if (keys.back().empty()) invalid("override '" + ov + "' has an empty path segment");
        if (!node->is_object()) invalid("override '" + ov + "' descends into a non-object");
        (*node)[keys.back()] = parsed;
    }
    return doc.dump();
}

}  // namespace wfpp
