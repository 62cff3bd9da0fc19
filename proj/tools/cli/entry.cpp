#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"
#include "holomorse/error.hpp"

namespace holomorse::cli {

namespace {

// TOOL_LOG: 0/quiet, 1/info (default warnings only), 2/debug
int log_level() {
    const char* v = std::getenv("TOOL_LOG");
    if (!v) return 0;
    std::string s = v;
    if (s == "debug" || s == "2") return 2;
    if (s == "info" || s == "1") return 1;
    return 0;
}

void log(int level, const std::string& msg) {
    if (log_level() >= level) std::cerr << "[holomorse] " << msg << "\n";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw UsageError(p.string() + ": cannot write");
    out << text;
}

}  // namespace

int main_entry(int argc, char** argv) {
    CLI::App app{"holomorse: Landau-Ginzburg, spectral network and wall-crossing computations"};
    std::string command, path;
    RunOptions opt;
    std::string out_dir;
    app.add_option("command", command, "pipeline to run")->required()->check(CLI::IsMember(commands()));
    app.add_option("config", path, "JSON config document")->required();
    app.add_option("--threads", opt.threads, "worker threads for parallel scans")->check(CLI::PositiveNumber);
    app.add_flag("--plots", opt.plots, "write SVG plots");
    app.add_option("--out", out_dir, "output directory for the envelope and plots");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (!out_dir.empty()) opt.out_dir = out_dir;

    try {
        RunConfig cfg = load_config(command, path);
        log(1, "running " + command + " on " + path);
        RunResult res = run(cfg, opt);
        std::filesystem::path dir = opt.out_dir ? std::filesystem::path(*opt.out_dir) : std::filesystem::path(".");
        if (opt.out_dir) std::filesystem::create_directories(dir);
        if (res.figure) {
            const std::string name = command + ".svg";
            write_file(dir / name, render_svg(*res.figure));
            res.envelope["plots"] = json::array({name});
            log(2, "wrote " + (dir / name).string());
        }
        for (const auto& problem : validate_envelope(res.envelope)) log(0, "schema: " + problem);
        const std::string text = res.envelope.dump(2) + "\n";
        if (opt.out_dir) write_file(dir / (command + ".json"), text);
        std::cout << text;
        if (res.exit_code != 0) log(0, "domain error: " + res.envelope["error"]["name"].get<std::string>());
        return res.exit_code;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace holomorse::cli
