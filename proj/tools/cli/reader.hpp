#pragma once

#include <set>
#include <string>
#include <vector>

#include "cli.hpp"

namespace holomorse::cli {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be rejected with their full path.
class Reader {
public:
    Reader(const json& j, std::string path);

    bool has(const std::string& key) const;
    const json& need(const std::string& key);
    const json* maybe(const std::string& key);
    Reader child(const std::string& key);
    std::string at(const std::string& key) const;

    double number(const std::string& key);
    double number_or(const std::string& key, double dflt);
    double positive_or(const std::string& key, double dflt);
    int integer(const std::string& key);
    int integer_or(const std::string& key, int dflt);
    bool boolean_or(const std::string& key, bool dflt);

    // leftover keys -> UsageError
    void finish() const;

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

[[noreturn]] void fail(const std::string& path, const std::string& what);

cx to_complex(const json& v, const std::string& path);
std::vector<cx> to_complex_list(const json& v, const std::string& path);
Phase to_phase(const json& v, const std::string& path);
std::vector<std::vector<int>> to_int_matrix(const json& v, const std::string& path);
std::vector<int> to_int_list(const json& v, const std::string& path);

json from_complex(cx z);

}  // namespace holomorse::cli
