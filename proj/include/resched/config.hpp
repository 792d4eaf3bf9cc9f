#ifndef RESCHED_CONFIG_HPP
#define RESCHED_CONFIG_HPP

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "resched/errors.hpp"
#include "resched/model.hpp"

namespace resched {

namespace cfg_detail {

struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

/// section -> key -> value, remembering source lines for diagnostics.
struct RawConfig {
    std::map<std::string, std::map<std::string, Entry>> sections;

    const Entry* find(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    std::string require(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e)
            throw ConfigError("missing key '" + key + "' in section [" + section +
                              "]");
        return e->value;
    }
};

inline RawConfig parse_raw(std::istream& in) {
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        raw.sections[section][key] = {value, lineno, false};
    }
    return raw;
}

inline double parse_real(const RawConfig& raw, const std::string& section,
                         const std::string& key) {
    std::string v = raw.require(section, key);
    try {
        std::size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' in [" + section +
                          "]: not a real number: '" + v + "'");
    }
}

inline int parse_int(const RawConfig& raw, const std::string& section,
                     const std::string& key) {
    std::string v = raw.require(section, key);
    try {
        std::size_t pos = 0;
        int out = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' in [" + section +
                          "]: not an integer: '" + v + "'");
    }
}

/// Pmf from <name>_offset / <name>_weights. Weights must be non-negative
/// and sum to 1 within 1e-9; sums inside the tolerance are renormalized.
inline Pmf parse_pmf(const RawConfig& raw, const std::string& section,
                     const std::string& name) {
    int offset = parse_int(raw, section, name + "_offset");
    std::string wstr = raw.require(section, name + "_weights");
    std::istringstream is(wstr);
    std::vector<double> w;
    double v;
    while (is >> v) w.push_back(v);
    if (!is.eof())
        throw ConfigError("key '" + name + "_weights' in [" + section +
                          "]: malformed weight list");
    if (w.empty())
        throw ConfigError("key '" + name + "_weights' in [" + section +
                          "]: empty weight list");
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0))
            throw ConfigError("key '" + name + "_weights' in [" + section +
                              "]: negative weight");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("key '" + name + "_weights' in [" + section +
                          "]: weights sum to " + std::to_string(sum) +
                          ", expected 1 within 1e-9");
    // Renormalize only when needed so serialize/parse round trips are exact.
    if (std::abs(sum - 1.0) <= kMassTol) return Pmf(offset, std::move(w));
    return Pmf::normalized(offset, std::move(w));
}

inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_pmf_weights(const Pmf& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ' ';
        out += fmt_real(p.weights()[i]);
    }
    return out;
}

} // namespace cfg_detail

inline ProblemSpec parse_spec(std::istream& in) {
    using namespace cfg_detail;
    RawConfig raw = parse_raw(in);

    ProblemSpec spec;
    spec.horizon = parse_int(raw, "", "horizon");
    spec.comm_cost = parse_real(raw, "", "comm_cost");
    spec.battery_cap = parse_int(raw, "energy", "battery_cap");
    spec.initial_energy = parse_pmf(raw, "energy", "initial");
    spec.harvest = parse_pmf(raw, "energy", "harvest");

    std::string kind = raw.require("source", "kind");
    if (kind == "random_walk")
        spec.source.kind = SourceKind::random_walk;
    else if (kind == "iid")
        spec.source.kind = SourceKind::iid;
    else if (kind == "gaussian_radial")
        spec.source.kind = SourceKind::gaussian_radial;
    else
        throw ConfigError("key 'kind' in [source]: unknown source kind '" + kind +
                          "'");

    if (spec.source.kind == SourceKind::gaussian_radial) {
        GaussianSpec g;
        g.dim = parse_int(raw, "gaussian", "dim");
        g.lambda = parse_real(raw, "gaussian", "lambda");
        g.s1 = parse_real(raw, "gaussian", "s1");
        g.s2 = parse_real(raw, "gaussian", "s2");
        spec.source.gaussian = g;
    } else {
        spec.source.init = parse_pmf(raw, "source", "init");
        spec.source.noise = parse_pmf(raw, "source", "noise");
    }

    std::string dk = raw.require("distortion", "kind");
    if (dk == "indicator")
        spec.distortion.kind = DistortionKind::indicator;
    else if (dk == "power")
        spec.distortion.kind = DistortionKind::power;
    else
        throw ConfigError("key 'kind' in [distortion]: unknown distortion '" + dk +
                          "'");
    if (spec.distortion.kind == DistortionKind::power)
        spec.distortion.k = parse_real(raw, "distortion", "k");

    if (spec.harvest.hi() > spec.battery_cap)
        std::fprintf(stderr,
                     "warning: harvest support exceeds battery_cap %d; "
                     "excess mass clipped onto the cap\n",
                     spec.battery_cap);
    spec.validate_and_clip();
    return spec;
}

inline ProblemSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_spec(in);
}

/// Canonical text form; parse(serialize(spec)) reproduces the spec exactly.
inline std::string serialize_spec(const ProblemSpec& spec) {
    using namespace cfg_detail;
    std::string out;
    out += "horizon = " + std::to_string(spec.horizon) + "\n";
    out += "comm_cost = " + fmt_real(spec.comm_cost) + "\n";
    out += "\n[energy]\n";
    out += "battery_cap = " + std::to_string(spec.battery_cap) + "\n";
    out += "initial_offset = " + std::to_string(spec.initial_energy.lo()) + "\n";
    out += "initial_weights = " + fmt_pmf_weights(spec.initial_energy) + "\n";
    out += "harvest_offset = " + std::to_string(spec.harvest.lo()) + "\n";
    out += "harvest_weights = " + fmt_pmf_weights(spec.harvest) + "\n";
    out += "\n[source]\n";
    switch (spec.source.kind) {
    case SourceKind::random_walk: out += "kind = random_walk\n"; break;
    case SourceKind::iid: out += "kind = iid\n"; break;
    case SourceKind::gaussian_radial: out += "kind = gaussian_radial\n"; break;
    }
    if (spec.source.kind != SourceKind::gaussian_radial) {
        out += "init_offset = " + std::to_string(spec.source.init.lo()) + "\n";
        out += "init_weights = " + fmt_pmf_weights(spec.source.init) + "\n";
        out += "noise_offset = " + std::to_string(spec.source.noise.lo()) + "\n";
        out += "noise_weights = " + fmt_pmf_weights(spec.source.noise) + "\n";
    } else {
        const GaussianSpec& g = *spec.source.gaussian;
        out += "\n[gaussian]\n";
        out += "dim = " + std::to_string(g.dim) + "\n";
        out += "lambda = " + fmt_real(g.lambda) + "\n";
        out += "s1 = " + fmt_real(g.s1) + "\n";
        out += "s2 = " + fmt_real(g.s2) + "\n";
    }
    out += "\n[distortion]\n";
    out += (spec.distortion.kind == DistortionKind::indicator)
               ? "kind = indicator\n"
               : "kind = power\nk = " + fmt_real(spec.distortion.k) + "\n";
    return out;
}

} // namespace resched

#endif
