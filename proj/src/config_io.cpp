// Copyright 2026 The mpdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpdsim/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mpd {

using nlohmann::json;

namespace {

void check_keys(const json &obj, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) {
        throw ValidationError(where + ": expected an object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &[key, value] : obj.items()) {
        if (!ok.count(key)) {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
}

double number(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ValidationError(where + "." + key + ": missing or not a number");
    }
    return it->get<double>();
}

std::int64_t integer(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) {
        throw ValidationError(where + "." + key + ": missing or not an integer");
    }
    return it->get<std::int64_t>();
}

OpticsElement element_from_json(const json &e, const std::string &where) {
    if (!e.is_object() || !e.contains("type") || !e["type"].is_string()) {
        throw ValidationError(where + ": element needs a string 'type'");
    }
    std::string type = e["type"];
    if (type == "free_space") {
        check_keys(e, where, {"type", "length_m"});
        return element::FreeSpace{number(e, "length_m", where)};
    }
    if (type == "lens") {
        check_keys(e, where, {"type", "focal_m"});
        return element::Lens{number(e, "focal_m", where)};
    }
    if (type == "frft") {
        check_keys(e, where, {"type", "order"});
        return element::Frft{number(e, "order", where)};
    }
    if (type == "scale") {
        check_keys(e, where, {"type", "a"});
        return element::Scale{number(e, "a", where)};
    }
    if (type == "chirp") {
        check_keys(e, where, {"type", "c"});
        return element::Chirp{number(e, "c", where)};
    }
    if (type == "abcd") {
        check_keys(e, where, {"type", "a", "b", "c", "d"});
        return element::Abcd{number(e, "a", where), number(e, "b", where), number(e, "c", where),
                             number(e, "d", where)};
    }
    if (type == "harmonic_oscillator") {
        check_keys(e, where, {"type", "duration_s"});
        return element::HarmonicOscillator{number(e, "duration_s", where)};
    }
    throw ValidationError(where + ": unknown element type '" + type + "'");
}

json element_to_json(const OpticsElement &e) {
    if (auto *v = std::get_if<element::FreeSpace>(&e)) {
        return {{"type", "free_space"}, {"length_m", v->length}};
    }
    if (auto *v = std::get_if<element::Lens>(&e)) {
        return {{"type", "lens"}, {"focal_m", v->focal}};
    }
    if (auto *v = std::get_if<element::Frft>(&e)) {
        return {{"type", "frft"}, {"order", v->order}};
    }
    if (auto *v = std::get_if<element::Scale>(&e)) {
        return {{"type", "scale"}, {"a", v->a}};
    }
    if (auto *v = std::get_if<element::Chirp>(&e)) {
        return {{"type", "chirp"}, {"c", v->c}};
    }
    if (auto *v = std::get_if<element::Abcd>(&e)) {
        return {{"type", "abcd"}, {"a", v->a}, {"b", v->b}, {"c", v->c}, {"d", v->d}};
    }
    const auto &v = std::get<element::HarmonicOscillator>(e);
    return {{"type", "harmonic_oscillator"}, {"duration_s", v.duration}};
}

}  // namespace

SetupConfig config_from_json(const json &doc) {
    check_keys(doc, "config", {"wavelength_m", "source", "planes", "optics", "sensor", "path_cap"});
    SetupConfig c;
    c.wavelength = number(doc, "wavelength_m", "config");

    if (!doc.contains("source")) {
        throw ValidationError("config.source: missing");
    }
    const json &src = doc["source"];
    if (!src.is_object() || !src.contains("kind") || !src["kind"].is_string()) {
        throw ValidationError("source.kind: missing or not a string");
    }
    std::string kind = src["kind"];
    if (kind == "gaussian") {
        check_keys(src, "source", {"kind", "sigma_m"});
        c.source = {SourceKind::gaussian, number(src, "sigma_m", "source"), 0};
    } else if (kind == "hermite_gaussian") {
        check_keys(src, "source", {"kind", "waist_m", "order"});
        c.source = {SourceKind::hermite_gaussian, number(src, "waist_m", "source"),
                    static_cast<int>(integer(src, "order", "source"))};
    } else {
        throw ValidationError("source.kind: unknown source kind '" + kind + "'");
    }

    if (!doc.contains("planes") || !doc["planes"].is_array()) {
        throw ValidationError("config.planes: missing or not an array");
    }
    for (std::size_t j = 0; j < doc["planes"].size(); j++) {
        std::string where = "planes[" + std::to_string(j) + "]";
        const json &p = doc["planes"][j];
        check_keys(p, where, {"slits"});
        if (!p.contains("slits") || !p["slits"].is_array()) {
            throw ValidationError(where + ".slits: missing or not an array");
        }
        DiffractionPlane plane;
        for (std::size_t i = 0; i < p["slits"].size(); i++) {
            std::string sw = where + ".slits[" + std::to_string(i) + "]";
            const json &s = p["slits"][i];
            check_keys(s, sw, {"center_m", "width_m"});
            plane.slits.push_back({number(s, "center_m", sw), number(s, "width_m", sw)});
        }
        c.planes.push_back(std::move(plane));
    }

    if (!doc.contains("optics") || !doc["optics"].is_array()) {
        throw ValidationError("config.optics: missing or not an array");
    }
    for (std::size_t s = 0; s < doc["optics"].size(); s++) {
        std::string where = "optics[" + std::to_string(s) + "]";
        const json &seg = doc["optics"][s];
        OpticsSegment segment;
        // A segment is either one element object or an array of elements.
        if (seg.is_array()) {
            for (std::size_t e = 0; e < seg.size(); e++) {
                segment.elements.push_back(element_from_json(seg[e], where + "[" + std::to_string(e) + "]"));
            }
        } else {
            segment.elements.push_back(element_from_json(seg, where));
        }
        c.optics.push_back(std::move(segment));
    }

    if (!doc.contains("sensor")) {
        throw ValidationError("config.sensor: missing");
    }
    const json &sensor = doc["sensor"];
    check_keys(sensor, "sensor", {"ts_m", "k_min", "k_max"});
    c.sensor = {number(sensor, "ts_m", "sensor"), integer(sensor, "k_min", "sensor"),
                integer(sensor, "k_max", "sensor")};

    if (doc.contains("path_cap")) {
        std::int64_t cap = integer(doc, "path_cap", "config");
        if (cap <= 0) {
            throw ValidationError("config.path_cap: must be positive");
        }
        c.path_cap = static_cast<std::uint64_t>(cap);
    }
    canonicalize(c);
    return c;
}

json config_to_json(const SetupConfig &c) {
    json doc;
    doc["wavelength_m"] = c.wavelength;
    if (c.source.kind == SourceKind::gaussian) {
        doc["source"] = {{"kind", "gaussian"}, {"sigma_m", c.source.width}};
    } else {
        doc["source"] = {{"kind", "hermite_gaussian"}, {"waist_m", c.source.width}, {"order", c.source.order}};
    }
    doc["planes"] = json::array();
    for (const auto &plane : c.planes) {
        json slits = json::array();
        for (const auto &s : plane.slits) {
            slits.push_back({{"center_m", s.center}, {"width_m", s.width}});
        }
        doc["planes"].push_back({{"slits", slits}});
    }
    doc["optics"] = json::array();
    for (const auto &seg : c.optics) {
        if (seg.elements.size() == 1) {
            doc["optics"].push_back(element_to_json(seg.elements[0]));
        } else {
            json arr = json::array();
            for (const auto &e : seg.elements) {
                arr.push_back(element_to_json(e));
            }
            doc["optics"].push_back(arr);
        }
    }
    doc["sensor"] = {{"ts_m", c.sensor.ts}, {"k_min", c.sensor.k_min}, {"k_max", c.sensor.k_max}};
    if (c.path_cap != default_path_cap) {
        doc["path_cap"] = c.path_cap;
    }
    return doc;
}

SetupConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError("config file '" + path + "': " + e.what());
    }
    return config_from_json(doc);
}

void save_config(const SetupConfig &config, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write config file '" + path + "'");
    }
    out << config_to_json(config).dump(2) << "\n";
}

std::string canonical_text(const json &doc) {
    return doc.dump();
}

}  // namespace mpd
