#pragma once

#include "aflw/qratfun.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace aflw {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Machine-readable run record. Deterministic for fixed inputs; the wall clock
// is emitted only on request so that default output is byte-stable.
struct RunReport {
    std::string command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    std::vector<CheckResult> checks;
    double wall_ms = -1;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;
};

// {num: [...], den: [...]} with ascending integer coefficients.
nlohmann::ordered_json qratfun_to_json(const QRatFun& f);

} // namespace aflw
