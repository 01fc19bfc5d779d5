#pragma once
/// @file report.hpp
/// @brief Named pass/fail checks with optional witnesses.

#include <string>
#include <vector>

namespace gtr {

struct Check {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct Report {
    std::string name;
    std::vector<Check> checks;

    Report() = default;
    explicit Report(std::string n) : name(std::move(n)) {}

    bool ok() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(const std::string& check, bool pass, const std::string& witness = "") {
        checks.push_back({check, pass, witness});
    }
    void merge(const Report& o, const std::string& prefix = "") {
        for (auto& c : o.checks) checks.push_back({prefix + c.name, c.pass, c.witness});
    }
};

}  // namespace gtr
