#include "aflw/report.hpp"

namespace aflw {

namespace {

nlohmann::ordered_json int_coeffs(const detail::IntPoly& p) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : p) {
        if (c >= std::numeric_limits<long long>::min() && c <= std::numeric_limits<long long>::max())
            arr.push_back(static_cast<long long>(c));
        else
            arr.push_back(c.str());
    }
    if (arr.empty()) arr.push_back(0);
    return arr;
}

} // namespace

nlohmann::ordered_json qratfun_to_json(const QRatFun& f) {
    auto [n, d] = f.cleared();
    nlohmann::ordered_json j;
    j["num"] = int_coeffs(n);
    j["den"] = int_coeffs(d);
    return j;
}

nlohmann::ordered_json RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = "afl-workbench/1";
    j["command"] = command;
    j["params"] = params;
    j["results"] = results;
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        cs.push_back(cj);
    }
    j["checks"] = cs;
    j["pass"] = all_pass();
    if (wall_ms >= 0) j["wall_ms"] = wall_ms;
    return j;
}

std::string RunReport::to_csv() const {
    std::string out = "v,N,Nprime,pass\n";
    if (results.contains("table"))
        for (const auto& row : results["table"]) {
            out += row["v"].dump() + "," + std::string(row["N"]) + "," +
                   std::string(row["nprime"]) + "," + (row["pass"].get<bool>() ? "true" : "false") +
                   "\n";
        }
    return out;
}

} // namespace aflw
