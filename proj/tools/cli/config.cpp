#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "reader.hpp"

namespace holomorse::cli {

void fail(const std::string& path, const std::string& what) {
    throw UsageError((path.empty() ? std::string("<root>") : path) + ": " + what);
}

Reader::Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
}

std::string Reader::at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Reader::has(const std::string& key) const { return j_.contains(key); }

const json& Reader::need(const std::string& key) {
    if (!j_.contains(key)) fail(at(key), "missing required key");
    used_.insert(key);
    return j_.at(key);
}

const json* Reader::maybe(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
}

Reader Reader::child(const std::string& key) { return Reader(need(key), at(key)); }

double Reader::number(const std::string& key) {
    const json& v = need(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    return v.get<double>();
}

double Reader::number_or(const std::string& key, double dflt) { return has(key) ? number(key) : dflt; }

double Reader::positive_or(const std::string& key, double dflt) {
    double v = number_or(key, dflt);
    if (!(v > 0.0) || !std::isfinite(v)) fail(at(key), "must be a positive finite number");
    return v;
}

int Reader::integer(const std::string& key) {
    const json& v = need(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
}

int Reader::integer_or(const std::string& key, int dflt) { return has(key) ? integer(key) : dflt; }

bool Reader::boolean_or(const std::string& key, bool dflt) {
    if (!has(key)) return dflt;
    const json& v = need(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
}

void Reader::finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
        if (!used_.count(it.key())) fail(at(it.key()), "unknown key");
}

cx to_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(path, "expected a number or [re, im]");
}

std::vector<cx> to_complex_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    std::vector<cx> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_complex(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

// a bare number is an angle in radians, a pair is a direction
Phase to_phase(const json& v, const std::string& path) {
    if (v.is_number()) return Phase::from_angle(v.get<double>());
    cx z = to_complex(v, path);
    if (std::abs(z) == 0.0) fail(path, "phase direction must be nonzero");
    return Phase(z);
}

std::vector<int> to_int_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) fail(path + "[" + std::to_string(i) + "]", "expected an integer");
        out.push_back(v[i].get<int>());
    }
    return out;
}

std::vector<std::vector<int>> to_int_matrix(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected a matrix");
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(to_int_list(v[i], path + "[" + std::to_string(i) + "]"));
        if (out.back().size() != v.size()) fail(path + "[" + std::to_string(i) + "]", "matrix must be square");
    }
    return out;
}

json from_complex(cx z) { return json::array({z.real(), z.imag()}); }

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"lg-crit",  "lg-solitons", "lg-thimble",  "periods-stokes", "fs-homs",
                                            "fs-mutate", "sw-trace",    "sw-spectrum", "dt-wcf"};
    return c;
}

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

RunConfig parse_config(const std::string& command, const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.command = command;
    cfg.path = origin;
    bool known = false;
    for (const auto& c : commands()) known = known || c == command;
    if (!known) throw UsageError("unknown command '" + command + "'");
    try {
        cfg.doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte is one past the offending character
        throw UsageError(origin + ":" + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": malformed JSON");
    }
    if (!cfg.doc.is_object()) fail("", "config document must be an object");
    if (cfg.doc.contains("seed")) {
        const json& s = cfg.doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            fail("seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (cfg.doc.contains("record_timing")) {
        if (!cfg.doc["record_timing"].is_boolean()) fail("record_timing", "expected true or false");
        cfg.record_timing = cfg.doc["record_timing"].get<bool>();
    }
    if (cfg.doc.contains("plots")) {
        if (!cfg.doc["plots"].is_boolean()) fail("plots", "expected true or false");
        cfg.plots = cfg.doc["plots"].get<bool>();
    }
    if (cfg.doc.contains("tolerances")) {
        const json& t = cfg.doc["tolerances"];
        if (!t.is_object()) fail("tolerances", "expected an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            const std::string p = "tolerances." + it.key();
            if (!it->is_number()) fail(p, "expected a number");
            double v = it->get<double>();
            if (!(v > 0.0) || !std::isfinite(v)) fail(p, "tolerance must be positive");
            cfg.tolerances[it.key()] = v;
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& command, const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".toml") throw UsageError(path + ": TOML documents are not supported; use JSON");
    if (ext != ".json") throw UsageError(path + ": config must be a .json document");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(path + ": cannot open config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(command, ss.str(), path);
}

}  // namespace holomorse::cli
