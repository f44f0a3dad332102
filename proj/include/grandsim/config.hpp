#pragma once

// Simulation configuration: a JSON document (or a small TOML subset: tables,
// dotted keys, strings, numbers, booleans, flat arrays, comments) parsed into
// a typed SimConfig, plus dotted-path key=value overrides.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "channel.hpp"
#include "equalize.hpp"
#include "modem.hpp"

namespace grandsim {

using Json = nlohmann::json;

enum class DecoderKind { grand_hard, orbgrand, orbgrand_ham_tie, sgrand };

inline const char* to_string(DecoderKind k) {
    switch (k) {
        case DecoderKind::grand_hard: return "grand-hard";
        case DecoderKind::orbgrand: return "orbgrand";
        case DecoderKind::orbgrand_ham_tie: return "orbgrand-ham-tie";
        case DecoderKind::sgrand: return "sgrand";
    }
    return "?";
}

inline DecoderKind parse_decoder(const std::string& s) {
    if (s == "grand-hard") return DecoderKind::grand_hard;
    if (s == "orbgrand") return DecoderKind::orbgrand;
    if (s == "orbgrand-ham-tie") return DecoderKind::orbgrand_ham_tie;
    if (s == "sgrand") return DecoderKind::sgrand;
    throw std::invalid_argument("unknown decoder: " + s);
}

inline Detector parse_detector(const std::string& s) {
    if (s == "zf") return Detector::zf;
    if (s == "mmse") return Detector::mmse;
    if (s == "ml") return Detector::ml;
    throw std::invalid_argument("unknown detector: " + s);
}

inline Softness parse_softness(const std::string& s) {
    if (s == "hard") return Softness::hard;
    if (s == "psoft") return Softness::psoft;
    if (s == "soft") return Softness::soft;
    throw std::invalid_argument("unknown softness: " + s);
}

inline const char* to_string(FadingKind k) {
    switch (k) {
        case FadingKind::awgn: return "awgn";
        case FadingKind::rayleigh: return "rayleigh";
        case FadingKind::rician: return "rician";
    }
    return "?";
}

inline FadingKind parse_fading(const std::string& s) {
    if (s == "awgn") return FadingKind::awgn;
    if (s == "rayleigh") return FadingKind::rayleigh;
    if (s == "rician") return FadingKind::rician;
    throw std::invalid_argument("unknown channel kind: " + s);
}

struct CodeSpec {
    std::string kind = "bch-cyclic";
    int m = 7;                 // bch-cyclic: field degree
    int t = 2;                 // bch-cyclic: designed correction capability
    std::size_t n = 0;         // ca-polar / random-linear / rate1 block length
    std::size_t k = 0;         // ca-polar / random-linear payload length
    int crc_width = 11;        // ca-polar
    std::string order_file;    // ca-polar: optional reliability order override
    uint64_t seed = 1;         // random-linear
    std::string path;          // from-file: alist location
};

struct StopRule {
    uint64_t min_block_errors = 200;
    uint64_t max_frames = 2'000'000;
};

struct SimConfig {
    CodeSpec code;
    std::string modulation = "bpsk";
    FadingModel channel{FadingKind::rayleigh, 0.0};
    Detector detector = Detector::zf;
    Softness softness = Softness::psoft;
    DecoderKind decoder = DecoderKind::orbgrand;
    uint64_t max_queries = 1'000'000;  // 0 = unlimited
    std::vector<double> snr_db;
    StopRule stop;
    uint64_t master_seed = 1;
    int workers = 0;  // 0: take the environment default, else 1
    std::string output = "grandsim";

    void validate() const {
        Constellation::by_name(modulation);  // throws on unknown names
        channel.validate();
        if (softness == Softness::soft && detector == Detector::ml)
            throw std::invalid_argument("softness=soft needs an equalizing detector (zf or mmse)");
        if (decoder != DecoderKind::grand_hard && softness == Softness::hard)
            throw std::invalid_argument(std::string(to_string(decoder)) +
                                        " needs bit reliabilities; pick softness psoft or soft");
        if (stop.min_block_errors < 1) throw std::invalid_argument("min_block_errors must be >= 1");
        if (stop.max_frames < 1) throw std::invalid_argument("max_frames must be >= 1");
        if (workers < 0) throw std::invalid_argument("workers must be >= 0");
        if (code.kind == "bch-cyclic" || code.kind == "ca-polar" || code.kind == "random-linear" ||
            code.kind == "from-file" || code.kind == "rate1") {
            if (code.kind == "from-file" && code.path.empty())
                throw std::invalid_argument("from-file code needs a path");
            if ((code.kind == "ca-polar" || code.kind == "random-linear" || code.kind == "rate1") &&
                code.n == 0)
                throw std::invalid_argument(code.kind + " code needs n");
            if ((code.kind == "ca-polar" || code.kind == "random-linear") && code.k == 0)
                throw std::invalid_argument(code.kind + " code needs k");
        } else {
            throw std::invalid_argument("unknown code kind: " + code.kind);
        }
    }
};

namespace detail {

inline void fail_at(std::size_t line, const std::string& msg) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

// cut an unquoted # comment off the line
inline std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
        else if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline Json parse_toml_scalar(const std::string& tok, std::size_t line_no) {
    if (tok.empty()) fail_at(line_no, "empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') fail_at(line_no, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
            if (tok[i] == '\\' && i + 2 < tok.size()) {
                ++i;
                if (tok[i] == '"') out += '"';
                else if (tok[i] == '\\') out += '\\';
                else fail_at(line_no, "unsupported escape");
            } else {
                out += tok[i];
            }
        }
        return Json(out);
    }
    if (tok == "true") return Json(true);
    if (tok == "false") return Json(false);
    // integer, then float
    try {
        std::size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos == tok.size()) return Json(v);
    } catch (...) {
    }
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos == tok.size()) return Json(v);
    } catch (...) {
    }
    fail_at(line_no, "cannot parse value '" + tok + "'");
    return Json();
}

inline Json parse_toml_value(const std::string& text, std::size_t line_no) {
    std::string v = trim(text);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') fail_at(line_no, "unterminated array");
        Json arr = Json::array();
        std::string body = v.substr(1, v.size() - 2);
        std::string item;
        bool quoted = false;
        for (char c : body) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                if (!trim(item).empty()) arr.push_back(parse_toml_scalar(trim(item), line_no));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) arr.push_back(parse_toml_scalar(trim(item), line_no));
        return arr;
    }
    return parse_toml_scalar(v, line_no);
}

inline Json* descend(Json& root, const std::string& dotted, std::size_t line_no) {
    Json* cur = &root;
    std::string part;
    std::stringstream ss(dotted);
    while (std::getline(ss, part, '.')) {
        part = trim(part);
        if (part.empty()) fail_at(line_no, "empty path segment in '" + dotted + "'");
        // operator[] turns a fresh null into an object; anything else is a clash
        if (!cur->is_object() && !cur->is_null())
            fail_at(line_no, "'" + dotted + "' crosses a non-table value");
        cur = &(*cur)[part];
    }
    return cur;
}

} // namespace detail

// Reads the supported TOML subset into the same document model as JSON input
inline Json parse_toml_subset(const std::string& text) {
    Json root = Json::object();
    Json* table = &root;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') detail::fail_at(line_no, "unterminated table header");
            std::string name = detail::trim(line.substr(1, line.size() - 2));
            if (name.empty()) detail::fail_at(line_no, "empty table name");
            table = detail::descend(root, name, line_no);
            if (!table->is_object() && !table->is_null())
                detail::fail_at(line_no, "table '" + name + "' collides with a value");
            if (table->is_null()) *table = Json::object();
            continue;
        }
        std::size_t eq = std::string::npos;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            else if (line[i] == '=' && !quoted) { eq = i; break; }
        }
        if (eq == std::string::npos) detail::fail_at(line_no, "expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        if (key.empty()) detail::fail_at(line_no, "empty key");
        Json* slot = detail::descend(*table, key, line_no);
        *slot = detail::parse_toml_value(line.substr(eq + 1), line_no);
    }
    return root;
}

// Loads a config document; .toml uses the subset reader, anything else JSON
inline Json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml")
        return parse_toml_subset(buf.str());
    return Json::parse(buf.str());
}

// Applies one dotted-path override, e.g. "channel.kind=rician" or
// "snr_db=[8,10,12]"; the value is JSON when it parses, a bare string otherwise
inline void apply_override(Json& doc, const std::string& kv) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override must look like key=value: " + kv);
    std::string path = detail::trim(kv.substr(0, eq));
    std::string value = detail::trim(kv.substr(eq + 1));
    Json parsed;
    try {
        parsed = Json::parse(value);
    } catch (...) {
        parsed = Json(value);
    }
    Json* slot = detail::descend(doc, path, 0);
    *slot = parsed;
}

namespace detail {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
    }
}

inline uint64_t read_u64(const Json& j, const char* key, uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
        throw std::invalid_argument(std::string(key) + " must be a nonnegative integer");
    return v.get<uint64_t>();
}

inline std::vector<double> read_snr(const Json& v) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number()) throw std::invalid_argument("snr_db entries must be numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    if (v.is_object()) {
        check_keys(v, {"start", "stop", "step"}, "snr_db");
        double start = v.at("start").get<double>();
        double stop = v.at("stop").get<double>();
        double step = v.at("step").get<double>();
        if (step <= 0.0) throw std::invalid_argument("snr_db.step must be positive");
        if (stop < start) throw std::invalid_argument("snr_db.stop must be >= start");
        for (double s = start; s <= stop + step * 1e-9; s += step) out.push_back(s);
        return out;
    }
    throw std::invalid_argument("snr_db must be an array or a start/stop/step table");
}

} // namespace detail

inline SimConfig parse_config(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("config root must be a table");
    detail::check_keys(j,
                       {"code", "modulation", "channel", "detector", "softness", "decoder",
                        "max_queries", "snr_db", "min_block_errors", "max_frames", "master_seed",
                        "workers", "output"},
                       "config");
    SimConfig cfg;
    if (j.contains("code")) {
        const Json& c = j.at("code");
        detail::check_keys(c, {"kind", "m", "t", "n", "k", "crc", "order_file", "seed", "path"},
                           "code");
        if (c.contains("kind")) cfg.code.kind = c.at("kind").get<std::string>();
        if (c.contains("m")) cfg.code.m = c.at("m").get<int>();
        if (c.contains("t")) cfg.code.t = c.at("t").get<int>();
        if (c.contains("n")) cfg.code.n = c.at("n").get<std::size_t>();
        if (c.contains("k")) cfg.code.k = c.at("k").get<std::size_t>();
        if (c.contains("crc")) cfg.code.crc_width = c.at("crc").get<int>();
        if (c.contains("order_file")) cfg.code.order_file = c.at("order_file").get<std::string>();
        if (c.contains("seed")) cfg.code.seed = c.at("seed").get<uint64_t>();
        if (c.contains("path")) cfg.code.path = c.at("path").get<std::string>();
    }
    if (j.contains("modulation")) cfg.modulation = j.at("modulation").get<std::string>();
    if (j.contains("channel")) {
        const Json& c = j.at("channel");
        detail::check_keys(c, {"kind", "k_factor"}, "channel");
        if (c.contains("kind")) cfg.channel.kind = parse_fading(c.at("kind").get<std::string>());
        if (c.contains("k_factor")) cfg.channel.k_factor = c.at("k_factor").get<double>();
    }
    if (j.contains("detector")) cfg.detector = parse_detector(j.at("detector").get<std::string>());
    if (j.contains("softness")) cfg.softness = parse_softness(j.at("softness").get<std::string>());
    if (j.contains("decoder")) cfg.decoder = parse_decoder(j.at("decoder").get<std::string>());
    if (j.contains("max_queries")) {
        const Json& v = j.at("max_queries");
        if (v.is_string()) {
            if (v.get<std::string>() != "unlimited")
                throw std::invalid_argument("max_queries must be an integer or \"unlimited\"");
            cfg.max_queries = 0;
        } else if (v.is_number_integer() && v.get<long long>() >= 1) {
            cfg.max_queries = v.get<uint64_t>();
        } else {
            throw std::invalid_argument("max_queries must be a positive integer or \"unlimited\"");
        }
    }
    if (j.contains("snr_db")) cfg.snr_db = detail::read_snr(j.at("snr_db"));
    cfg.stop.min_block_errors = detail::read_u64(j, "min_block_errors", cfg.stop.min_block_errors);
    cfg.stop.max_frames = detail::read_u64(j, "max_frames", cfg.stop.max_frames);
    cfg.master_seed = detail::read_u64(j, "master_seed", cfg.master_seed);
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    cfg.validate();
    return cfg;
}

// Canonical document for the effective configuration, embedded in result files
inline Json config_to_json(const SimConfig& cfg) {
    Json code{{"kind", cfg.code.kind}};
    if (cfg.code.kind == "bch-cyclic") {
        code["m"] = cfg.code.m;
        code["t"] = cfg.code.t;
    } else if (cfg.code.kind == "ca-polar") {
        code["n"] = cfg.code.n;
        code["k"] = cfg.code.k;
        code["crc"] = cfg.code.crc_width;
        if (!cfg.code.order_file.empty()) code["order_file"] = cfg.code.order_file;
    } else if (cfg.code.kind == "random-linear") {
        code["n"] = cfg.code.n;
        code["k"] = cfg.code.k;
        code["seed"] = cfg.code.seed;
    } else if (cfg.code.kind == "rate1") {
        code["n"] = cfg.code.n;
    } else if (cfg.code.kind == "from-file") {
        code["path"] = cfg.code.path;
    }
    Json channel{{"kind", to_string(cfg.channel.kind)}};
    if (cfg.channel.kind == FadingKind::rician) channel["k_factor"] = cfg.channel.k_factor;
    Json j{{"code", code},
           {"modulation", cfg.modulation},
           {"channel", channel},
           {"detector", to_string(cfg.detector)},
           {"softness", to_string(cfg.softness)},
           {"decoder", to_string(cfg.decoder)},
           {"snr_db", cfg.snr_db},
           {"min_block_errors", cfg.stop.min_block_errors},
           {"max_frames", cfg.stop.max_frames},
           {"master_seed", cfg.master_seed},
           {"workers", cfg.workers},
           {"output", cfg.output}};
    if (cfg.max_queries == 0)
        j["max_queries"] = "unlimited";
    else
        j["max_queries"] = cfg.max_queries;
    return j;
}

} // namespace grandsim
