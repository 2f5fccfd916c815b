// afl-workbench: exact two-sided computation of the GL4 linear arithmetic
// fundamental lemma at the unit Hecke function. Subcommands compute the
// intersection-number recursions, the orbital-integral polynomials, run the
// brute-force lattice/counting oracles, and cross-verify everything.

#include "aflw/geomside.hpp"
#include "aflw/latoracle.hpp"
#include "aflw/orbside.hpp"
#include "aflw/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <thread>

using namespace aflw;

namespace {

int finish(RunReport& rep, const std::string& format, bool timing,
           std::chrono::steady_clock::time_point t0) {
    if (timing) {
        auto dt = std::chrono::steady_clock::now() - t0;
        rep.wall_ms = std::chrono::duration<double, std::milli>(dt).count();
    }
    if (format == "csv")
        std::cout << rep.to_csv();
    else
        std::cout << rep.to_json().dump(2) << "\n";
    return rep.all_pass() ? 0 : 1;
}

void add_checks(RunReport& rep, const std::vector<CheckResult>& cs) {
    rep.checks.insert(rep.checks.end(), cs.begin(), cs.end());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for GL4 linear-AFL intersection numbers and orbital integrals"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");
    app.fallthrough();

    std::string format = "json";
    bool timing = false;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
    app.add_option("--format", format, "output format (json|csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timing", timing, "include wall-clock time in the report");
    app.add_option("--jobs", jobs, "worker threads for suites and oracles");

    auto* c_int = app.add_subcommand("intersect", "geometric intersection number");
    c_int->set_help_flag("--help", "print help");
    int i_h = 2;
    long long i_v = 1;
    long long i_q = 0;
    c_int->add_option("--h", i_h, "rank parameter h");
    c_int->add_option("--v", i_v, "odd valuation v = v_F(P(1))")->required();
    c_int->add_option("--q", i_q, "numeric residue cardinality (symbolic if omitted)");

    auto* c_orb = app.add_subcommand("orbital", "orbital integral polynomial in T = -q^{2s}");
    long long o_v = 1;
    long long o_q = 0;
    c_orb->add_option("--v", o_v, "odd valuation v")->required();
    c_orb->add_option("--q", o_q, "numeric residue cardinality (symbolic if omitted)");

    auto* c_ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "afl";
    long long vmax = 39;
    c_ver->add_option("--suite", suite, "identities|geometry|orbital|afl|oracle")
        ->check(CLI::IsMember({"identities", "geometry", "orbital", "afl", "oracle"}));
    c_ver->add_option("--v-max", vmax, "largest odd v");

    auto* c_ora = app.add_subcommand("oracle", "brute-force oracles");
    c_ora->require_subcommand(1);
    auto* c_lat = c_ora->add_subcommand("lattices", "stable lattice classes for a matched pair");
    int l_q = 2, l_window = 0, l_prec = 0;
    long long l_v = 1;
    c_lat->add_option("--q", l_q, "residue cardinality (prime)");
    c_lat->add_option("--v", l_v, "odd valuation v")->required();
    c_lat->add_option("--window", l_window, "window depth (default v + 3)");
    c_lat->add_option("--prec", l_prec, "working precision");
    auto* c_mat = c_ora->add_subcommand("matcount", "determinant-valuation densities");
    int m_a = 1, m_Q = 4, m_N = 3, m_chunks = 8;
    c_mat->add_option("--a", m_a, "matrix size (1 or 2)");
    c_mat->add_option("--Q", m_Q, "field cardinality");
    c_mat->add_option("--N", m_N, "truncation level");
    c_mat->add_option("--chunks", m_chunks, "deterministic partition of the state space");
    auto* c_cls = c_ora->add_subcommand("classstat", "h=1 unramified class statistic");
    int s_q = 2, s_N = 5;
    c_cls->add_option("--q", s_q, "residue cardinality (2 or 3)");
    c_cls->add_option("--N", s_N, "truncation level");

    auto* c_tab = app.add_subcommand("table", "tabulate N and N' for odd v");
    long long t_vmax = 5;
    c_tab->add_option("--v-max", t_vmax, "largest odd v");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    try {
        if (*c_int) {
            rep.command = "intersect";
            rep.params["h"] = i_h;
            rep.params["v"] = i_v;
            QRatFun val = intersection_number(i_h, i_v);
            rep.results["N"] = val.to_string();
            rep.results["N_coeffs"] = qratfun_to_json(val);
            rep.results["polynomial_in_q"] = val.is_polynomial_in_q();
            if (i_q > 1) {
                rep.params["q"] = i_q;
                Rational numeric = val.eval_at(Rational(i_q));
                rep.results["N_at_q"] = numeric.str();
            }
            if (i_h == 2) {
                rep.checks.push_back({"closed form agrees", val == N_closed(i_v), ""});
                rep.checks.push_back({"step recursion agrees", val == N_step(i_v), ""});
            }
        } else if (*c_orb) {
            rep.command = "orbital";
            rep.params["v"] = o_v;
            TPoly orb = orbital_poly(o_v);
            nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
            for (long long m = 0; m <= o_v; ++m) {
                if (o_q > 1)
                    coeffs.push_back(orb.coeff(m).eval_at(Rational(o_q)).str());
                else
                    coeffs.push_back(orb.coeff(m).to_string());
            }
            if (o_q > 1) rep.params["q"] = o_q;
            rep.results["T_coefficients"] = coeffs;
            QRatFun np = dq_statistic(orb);
            rep.results["nprime"] = np.to_string();
            rep.results["nprime_coeffs"] = qratfun_to_json(np);
            rep.checks.push_back({"closed N' agrees", np == nprime(o_v), ""});
            rep.checks.push_back({"step N' agrees", np == nprime_step(o_v), ""});
            bool palin = true;
            for (long long m = 0; m <= o_v; ++m)
                if (!(orb.coeff(m) == orb.coeff(o_v - m))) palin = false;
            rep.checks.push_back({"palindromic", palin, ""});
            rep.checks.push_back(
                {"vanishes at T=-1", orb.eval_T(QRatFun(Rational(-1))).is_zero(), ""});
        } else if (*c_ver) {
            rep.command = "verify";
            rep.params["suite"] = suite;
            rep.params["v_max"] = vmax;
            if (suite == "identities") add_checks(rep, run_identities_suite());
            else if (suite == "geometry") add_checks(rep, run_geometry_suite(vmax));
            else if (suite == "orbital") add_checks(rep, run_orbital_suite(vmax));
            else if (suite == "afl") add_checks(rep, run_afl_suite(vmax));
            else add_checks(rep, run_oracle_suite(jobs));
        } else if (*c_lat) {
            rep.command = "oracle lattices";
            rep.params["q"] = l_q;
            rep.params["v"] = l_v;
            LatticeOracleRun run = run_lattice_oracle(l_q, l_v, l_window, l_prec);
            rep.params["window"] = run.window;
            rep.params["prec"] = run.prec;
            rep.results["class_count"] = run.stable_count;
            nlohmann::ordered_json per = nlohmann::ordered_json::array();
            for (const auto& c : run.classes) {
                nlohmann::ordered_json j;
                j["m_plus"] = c.m_plus;
                j["m_minus"] = c.m_minus;
                j["length"] = c.length;
                j["stab_index"] = c.stab_index;
                per.push_back(j);
            }
            rep.results["per_class"] = per;
            nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
            for (long long m = 0; m <= l_v; ++m)
                coeffs.push_back(run.weighted.coeff(m).eval_at(Rational(1)).str());
            rep.results["weighted_poly"] = coeffs;
            TPoly expect;
            TPoly sym = orbital_poly(l_v);
            for (const auto& [m, c] : sym.terms())
                expect.add_term(m, QRatFun(c.eval_at(Rational(l_q))));
            rep.checks.push_back({"matches the orbital polynomial", run.weighted == expect, ""});
        } else if (*c_mat) {
            rep.command = "oracle matcount";
            rep.params["a"] = m_a;
            rep.params["Q"] = m_Q;
            rep.params["N"] = m_N;
            DetValuationCount c = count_det_valuations(m_a, m_Q, m_N, m_chunks, jobs);
            nlohmann::ordered_json meas = nlohmann::ordered_json::array(),
                                   exp = nlohmann::ordered_json::array();
            bool all = true;
            for (int n = 0; n < m_N; ++n) {
                meas.push_back(c.measured[static_cast<size_t>(n)].str());
                exp.push_back(c.expected[static_cast<size_t>(n)].str());
                if (c.measured[static_cast<size_t>(n)] != c.expected[static_cast<size_t>(n)])
                    all = false;
            }
            rep.results["measured"] = meas;
            rep.results["expected"] = exp;
            rep.checks.push_back({"counts match the product formula", all, ""});
        } else if (*c_cls) {
            rep.command = "oracle classstat";
            rep.params["q"] = s_q;
            rep.params["N"] = s_N;
            ClassValuationStat s = count_class_valuation_stat(s_q, s_N);
            nlohmann::ordered_json buckets = nlohmann::ordered_json::object();
            for (const auto& [w, vol] : s.buckets)
                buckets[w < 0 ? "at_least_N" : std::to_string(w)] = vol.str();
            rep.results["buckets"] = buckets;
            rep.results["total"] = s.total.str();
            Rational qr(s_q);
            rep.checks.push_back(
                {"total mass = 1 - 1/q", s.total == Rational(1) - Rational(1) / qr, ""});
            bool odd_zero = true;
            for (const auto& [w, vol] : s.buckets)
                if (w > 0 && w % 2 == 1 && vol != Rational(0)) odd_zero = false;
            rep.checks.push_back({"odd buckets vanish", odd_zero, ""});
            bool evens = true;
            for (long long n = 1; 2 * n < s_N; ++n) {
                Rational expect = Rational(1) - Rational(1) / (qr * qr);
                for (long long k = 0; k < 2 * n; ++k) expect /= qr;
                auto it = s.buckets.find(2 * n);
                if (it == s.buckets.end() || it->second != expect) evens = false;
            }
            rep.checks.push_back({"even buckets match (1-q^-2) q^{-2n}", evens, ""});
        } else if (*c_tab) {
            rep.command = "table";
            rep.params["v_max"] = t_vmax;
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (long long v = 1; v <= t_vmax; v += 2) {
                AflReport a = afl_verify(v);
                nlohmann::ordered_json row;
                row["v"] = v;
                row["N"] = a.intersection.to_string();
                row["nprime"] = a.n_prime_closed.to_string();
                row["pass"] = a.pass;
                rows.push_back(row);
                rep.checks.push_back({"v=" + std::to_string(v), a.pass, a.diverging});
            }
            rep.results["table"] = rows;
        }
    } catch (const error& e) {
        rep.results["error"] = e.what();
        rep.checks.push_back({"completed without library errors", false, e.what()});
        return finish(rep, format, timing, t0);
    }
    return finish(rep, format, timing, t0);
}
