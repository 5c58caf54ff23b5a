#ifndef SEEBECK_SERIALIZATION_HPP
#define SEEBECK_SERIALIZATION_HPP

#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seebeck/profile.hpp"

// Profile files are JSON objects of one of two kinds:
//   {"kind": "sampled",   "values": [..], "bounds": {"s0": .., "s1": ..}}
//   {"kind": "piecewise", "segments": [{"from": .., "to": .., "type": "constant",   "value": ..},
//                                      {"from": .., "to": .., "type": "hyperbolic", "q": ..}, ..],
//    "bounds": {..}}
// "bounds" is optional. Unknown fields are rejected at every level.

namespace seebeck {

struct ProfileDocument {
    std::optional<SampledProfile> sampled;
    std::optional<PiecewiseProfile> piecewise;
    std::optional<SeebeckBounds> bounds;

    bool is_piecewise() const { return piecewise.has_value(); }
};

namespace detail {

inline void reject_unknown_fields(const nlohmann::json& obj, const std::set<std::string>& allowed,
                                  const std::string& where) {
    for (const auto& item : obj.items()) {
        if (allowed.find(item.key()) == allowed.end())
            throw std::invalid_argument("profile document: unknown field '" + item.key() +
                                        "' in " + where);
    }
}

inline double number_field(const nlohmann::json& obj, const std::string& key,
                           const std::string& where) {
    if (!obj.contains(key))
        throw std::invalid_argument("profile document: missing field '" + key + "' in " + where);
    if (!obj.at(key).is_number())
        throw std::invalid_argument("profile document: field '" + key + "' in " + where +
                                    " must be a number");
    return obj.at(key).get<double>();
}

}  // namespace detail

inline ProfileDocument parse_profile_document(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw std::invalid_argument("profile document: top level must be a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string())
        throw std::invalid_argument("profile document: missing string field 'kind'");
    const std::string kind = doc.at("kind").get<std::string>();

    ProfileDocument out;
    if (doc.contains("bounds")) {
        const auto& b = doc.at("bounds");
        if (!b.is_object())
            throw std::invalid_argument("profile document: field 'bounds' must be an object");
        detail::reject_unknown_fields(b, {"s0", "s1"}, "'bounds'");
        out.bounds.emplace(detail::number_field(b, "s0", "'bounds'"),
                           detail::number_field(b, "s1", "'bounds'"));
    }

    if (kind == "sampled") {
        detail::reject_unknown_fields(doc, {"kind", "values", "bounds"}, "the top-level object");
        if (!doc.contains("values") || !doc.at("values").is_array())
            throw std::invalid_argument("profile document: 'sampled' needs an array field 'values'");
        std::vector<double> values;
        values.reserve(doc.at("values").size());
        for (const auto& v : doc.at("values")) {
            if (!v.is_number())
                throw std::invalid_argument("profile document: 'values' entries must be numbers");
            values.push_back(v.get<double>());
        }
        out.sampled.emplace(std::move(values));
    } else if (kind == "piecewise") {
        detail::reject_unknown_fields(doc, {"kind", "segments", "bounds"}, "the top-level object");
        if (!doc.contains("segments") || !doc.at("segments").is_array())
            throw std::invalid_argument(
                "profile document: 'piecewise' needs an array field 'segments'");
        std::vector<Segment> segs;
        std::size_t idx = 0;
        for (const auto& s : doc.at("segments")) {
            const std::string where = "segment " + std::to_string(idx);
            if (!s.is_object())
                throw std::invalid_argument("profile document: " + where + " must be an object");
            if (!s.contains("type") || !s.at("type").is_string())
                throw std::invalid_argument("profile document: missing string field 'type' in " +
                                            where);
            const std::string type = s.at("type").get<std::string>();
            const double from = detail::number_field(s, "from", where);
            const double to = detail::number_field(s, "to", where);
            if (type == "constant") {
                detail::reject_unknown_fields(s, {"from", "to", "type", "value"}, where);
                segs.push_back({from, to, ConstantSegment{detail::number_field(s, "value", where)}});
            } else if (type == "hyperbolic") {
                detail::reject_unknown_fields(s, {"from", "to", "type", "q"}, where);
                segs.push_back({from, to, HyperbolicSegment{detail::number_field(s, "q", where)}});
            } else {
                throw std::invalid_argument("profile document: field 'type' in " + where +
                                            " must be 'constant' or 'hyperbolic'");
            }
            ++idx;
        }
        out.piecewise.emplace(std::move(segs));
    } else {
        throw std::invalid_argument("profile document: field 'kind' must be 'sampled' or "
                                    "'piecewise', got '" +
                                    kind + "'");
    }
    return out;
}

inline ProfileDocument load_profile_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("profile document: " + path + ": " + e.what());
    }
    return parse_profile_document(doc);
}

inline nlohmann::json to_json(const PiecewiseProfile& pw) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : pw.segments()) {
        nlohmann::json seg{{"from", s.from}, {"to", s.to}};
        if (const auto* c = std::get_if<ConstantSegment>(&s.shape)) {
            seg["type"] = "constant";
            seg["value"] = c->value;
        } else {
            seg["type"] = "hyperbolic";
            seg["q"] = std::get<HyperbolicSegment>(s.shape).q;
        }
        segs.push_back(std::move(seg));
    }
    return nlohmann::json{{"kind", "piecewise"}, {"segments", std::move(segs)}};
}

inline nlohmann::json to_json(const SampledProfile& sp) {
    return nlohmann::json{{"kind", "sampled"}, {"values", sp.values()}};
}

}  // namespace seebeck

#endif  // SEEBECK_SERIALIZATION_HPP
