#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "holomorse/types.hpp"

namespace holomorse::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// Bad command line or config document; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    int threads = 1;
    bool plots = false;
    std::optional<std::string> out_dir;
};

// Parsed document plus the bits every command shares.
struct RunConfig {
    std::string command;
    std::string path;
    json doc;
    std::uint64_t seed = 12345;
    bool record_timing = false;
    bool plots = false;
    std::map<std::string, double> tolerances;
};

const std::vector<std::string>& commands();

// Reads and validates the document envelope; command-specific keys are
// validated during dispatch.
RunConfig load_config(const std::string& command, const std::string& path);
RunConfig parse_config(const std::string& command, const std::string& text, const std::string& origin);

struct Polyline {
    std::vector<cx> points;
    bool closed = false;
    std::string cls;
};

struct Marker {
    cx at;
    std::string label;
};

struct Figure {
    std::vector<Polyline> paths;
    std::vector<Marker> markers;
};

// Deterministic SVG: fixed precision, sorted elements, viewBox with a 5%
// margin. Throws EmptyGeometry when there is nothing to draw.
std::string render_svg(const Figure& fig);

struct RunResult {
    json envelope;
    std::optional<Figure> figure;
    int exit_code = 0;
};

// Dispatches to one pipeline. Domain errors are reported inside the
// envelope with exit code 2; UsageError propagates.
RunResult run(const RunConfig& cfg, const RunOptions& opt);

// Problems found when checking an emitted document against the schema of
// its command; empty when it conforms.
std::vector<std::string> validate_payload(const std::string& command, const json& payload);
std::vector<std::string> validate_envelope(const json& envelope);

int main_entry(int argc, char** argv);

}  // namespace holomorse::cli
