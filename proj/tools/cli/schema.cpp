#include <map>

#include "cli.hpp"

namespace holomorse::cli {

namespace {

// Schemas are written as JSON. A string names a kind (int, num, bool, str,
// cx, any) with "|" for alternatives, a one-element array is a homogeneous
// array, an object lists required keys ("?key" marks an optional one).
const json& schemas() {
    static const json s = json::parse(R"({
  "crit": {"id": "int", "position": ["cx"], "value": "cx", "hessian_det": "cx"},
  "lg-crit": {"critical_points": [{"$ref": "crit"}], "expected": "int", "complete": "bool", "restarts_used": "int"},
  "lg-solitons": {
    "critical_points": [{"$ref": "crit"}], "mu_matrix": [["int"]], "heuristic": "bool", "phase_table": [["cx|null"]],
    "solitons": [{"source": "int", "target": "int", "sign": "int", "phase": "cx", "energy": "num", "?samples": ["cx"]}]
  },
  "lg-thimble": {
    "critical_points": [{"$ref": "crit"}], "zeta": "cx",
    "thimbles": [{"source": "int", "image_distance": "num", "rays": [{
      "termination": "str", "captured_id": "int", "im_drift": "num", "monotone": "bool", "length": "num",
      "samples": [["cx"]], "values": ["cx"]}]}]
  },
  "periods-stokes": {
    "critical_points": [{"$ref": "crit"}],
    "periods": [{"thimble": "int", "u": "cx", "value": "cx", "est_error": "num"}],
    "stokes_factors": [{"source": "int", "target": "int", "ray": "cx", "entry": "int", "raw": "cx", "residual": "num"}],
    "mu_matrix": [["int"]],
    "stokes_matrix": {"zeta": "cx", "order": ["int"], "S": [["int"]]}
  },
  "fs-homs": {
    "homs": [{"source": "int", "target": "int", "rank": "int",
              "polygons": [{"vertices": ["int"], "rank": "int", "degree": "int"}]}],
    "associativity": {"triples": "int", "nonzero": "int", "failures": "int"},
    "max_rounding": "num", "denominator": "int"
  },
  "fs-mutate": {
    "initial": {"ordering": ["int"], "S": [["int"]]},
    "steps": [{"crossed": ["int"], "zeta": "cx", "ordering": ["int"], "S": [["int"]], "invariant": "bool"}],
    "invariant": "bool", "full_rotation": "bool", "returned": "bool"
  },
  "sw-trace": {
    "turning_points": ["cx"], "zeta": "cx",
    "trajectories": [{"from": "int", "prong": "int", "end": "str", "hit": "int", "length": "num",
                      "im_drift": "num", "points": ["cx"]}]
  },
  "sw-spectrum": {
    "turning_points": ["cx"], "lattice": {"rank": "int", "pairing": [["int"]]}, "Z": ["cx"],
    "entries": [{"gamma": ["int"], "omega": "int", "arg_Z": "num", "connection_phase": "num", "from": "int", "to": "int"}],
    "states": "int", "max_alignment": "num", "phase_grid": "int", "support": {"A": "num", "pass": "bool"}
  },
  "dt-wcf": {
    "equal": "bool", "N": "int", "basis": [["int"]], "order_a": [["int"]], "order_b": [["int"]],
    "sector_a": "num", "sector_b": "num",
    "first_divergence": "null|divergence"
  },
  "divergence": {"generator": "int", "exponent": ["int"], "height": "int", "a": "str", "b": "str"},
  "envelope": {
    "tool": "str", "version": "str", "command": "str", "config": "any", "seed": "int", "payload": "any",
    "error": "null|error", "warnings": ["str"], "?wall_clock_s": "num", "?plots": ["str"]
  },
  "error": {"name": "str", "message": "str"}
})");
    return s;
}

bool kind_matches(const std::string& kind, const json& v, const std::string& where, std::vector<std::string>& out);

void check(const json& schema, const json& v, const std::string& where, std::vector<std::string>& out) {
    if (schema.is_string()) {
        const std::string s = schema.get<std::string>();
        std::vector<std::string> errs;
        std::size_t pos = 0;
        while (true) {
            const auto bar = s.find('|', pos);
            std::vector<std::string> local;
            if (kind_matches(s.substr(pos, bar == std::string::npos ? bar : bar - pos), v, where, local)) return;
            errs.insert(errs.end(), local.begin(), local.end());
            if (bar == std::string::npos) break;
            pos = bar + 1;
        }
        if (errs.empty()) errs.push_back(where + ": expected " + s);
        out.insert(out.end(), errs.begin(), errs.end());
        return;
    }
    if (schema.is_array()) {
        if (!v.is_array()) {
            out.push_back(where + ": expected an array");
            return;
        }
        for (std::size_t i = 0; i < v.size(); ++i) check(schema[0], v[i], where + "[" + std::to_string(i) + "]", out);
        return;
    }
    if (schema.contains("$ref")) return check(schemas().at(schema["$ref"].get<std::string>()), v, where, out);
    if (!v.is_object()) {
        out.push_back(where + ": expected an object");
        return;
    }
    for (const auto& [k, sub] : schema.items()) {
        const bool optional = !k.empty() && k[0] == '?';
        const std::string key = optional ? k.substr(1) : k;
        if (!v.contains(key)) {
            if (!optional) out.push_back(where + "." + key + ": missing");
            continue;
        }
        check(sub, v[key], where + "." + key, out);
    }
    for (const auto& [k, _] : v.items())
        if (!schema.contains(k) && !schema.contains("?" + k)) out.push_back(where + "." + k + ": not in schema");
}

bool kind_matches(const std::string& kind, const json& v, const std::string& where, std::vector<std::string>& out) {
    if (kind == "any") return true;
    if (kind == "null") return v.is_null();
    if (kind == "int") return v.is_number_integer();
    if (kind == "num") return v.is_number();
    if (kind == "bool") return v.is_boolean();
    if (kind == "str") return v.is_string();
    if (kind == "cx") return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
    if (schemas().contains(kind)) {
        if (v.is_null()) return false;
        check(schemas()[kind], v, where, out);
        return out.empty();
    }
    out.push_back(where + ": unknown schema kind " + kind);
    return false;
}

}  // namespace

std::vector<std::string> validate_payload(const std::string& command, const json& payload) {
    std::vector<std::string> out;
    if (!schemas().contains(command) || command == "envelope") {
        out.push_back("no schema for command '" + command + "'");
        return out;
    }
    check(schemas()[command], payload, "payload", out);
    return out;
}

std::vector<std::string> validate_envelope(const json& env) {
    std::vector<std::string> out;
    check(schemas()["envelope"], env, "envelope", out);
    if (!out.empty() || !env["error"].is_null()) return out;
    auto p = validate_payload(env["command"].get<std::string>(), env["payload"]);
    out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace holomorse::cli
