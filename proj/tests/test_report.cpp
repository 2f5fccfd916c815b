#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aflw/report.hpp"

using namespace aflw;

TEST_CASE("qratfun json record") {
    QRatFun f = QRatFun::q() + QRatFun(Rational(2));
    nlohmann::ordered_json j = qratfun_to_json(f);
    CHECK(j["num"] == nlohmann::ordered_json::array({2, 1}));
    CHECK(j["den"] == nlohmann::ordered_json::array({1}));
    QRatFun g = (QRatFun(Rational(1)) - QRatFun::q_pow(-4)) / (QRatFun(Rational(1)) - QRatFun::q_pow(-2));
    nlohmann::ordered_json jg = qratfun_to_json(g);
    CHECK(jg["num"] == nlohmann::ordered_json::array({1, 0, 1}));
    CHECK(jg["den"] == nlohmann::ordered_json::array({0, 0, 1}));
}

TEST_CASE("report json round-trips and carries the schema tag") {
    RunReport rep;
    rep.command = "intersect";
    rep.params["v"] = 3;
    rep.results["N"] = "q + 2";
    rep.checks.push_back({"closed form agrees", true, ""});
    nlohmann::ordered_json j = rep.to_json();
    CHECK(j["schema"] == "afl-workbench/1");
    CHECK(j["pass"] == true);
    // round trip through the parser
    auto parsed = nlohmann::ordered_json::parse(j.dump());
    CHECK(parsed == j);
    CHECK(!j.contains("wall_ms")); // timing only on request
}

TEST_CASE("csv emission") {
    RunReport rep;
    CHECK(rep.to_csv() == "v,N,Nprime,pass\n"); // empty report: header only
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (long long v : {1, 3, 5}) {
        nlohmann::ordered_json row;
        row["v"] = v;
        row["N"] = "x";
        row["nprime"] = "y";
        row["pass"] = true;
        rows.push_back(row);
    }
    rep.results["table"] = rows;
    std::string csv = rep.to_csv();
    CHECK(csv == "v,N,Nprime,pass\n1,x,y,true\n3,x,y,true\n5,x,y,true\n");
}

TEST_CASE("failed checks flip the report status") {
    RunReport rep;
    rep.checks.push_back({"a", true, ""});
    rep.checks.push_back({"b", false, "broke"});
    CHECK(!rep.all_pass());
    CHECK(rep.to_json()["pass"] == false);
}
