// Command-line front end: decompose, integrate, fubini, oracle, scenario.
//
// Exit codes: 0 pass, 1 mismatch/verdict failure, 2 usage error,
// 3 resource exhaustion (grid or root-search budget).

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lf2/fubini.hpp"
#include "lf2/oracle.hpp"
#include "lf2/parse.hpp"
#include "lf2/scenario.hpp"

using namespace lf2;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<int, int> parse_grid(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw parse_error("grid must be t:u", 0);
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact integration on a two-dimensional local field"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    std::string field_str = "Qp(5)((t))";
    bool as_json = false;
    int kprec = DEFAULT_KPREC;
    uint64_t seed = 1;
    app.add_option("--field", field_str, "field tower, e.g. Qp(5)((t)) or Fq(5,1)((u))((t))");
    app.add_flag("--json", as_json, "machine-readable output");
    app.add_option("--precision", kprec, "working precision for K-level approximations");
    app.add_option("--seed", seed, "seed for randomized verification");

    // decompose
    auto* dec_cmd = app.add_subcommand("decompose", "decompose a polynomial preimage");
    std::string q_str, b_str = "0";
    int A = 1;
    dec_cmd->add_option("--q", q_str, "polynomial over F")->required();
    dec_cmd->add_option("--b", b_str, "target center");
    dec_cmd->add_option("--A", A, "target depth")->required();

    // integrate
    auto* int_cmd = app.add_subcommand("integrate", "integrate a lifted function");
    std::string fn_file;
    int_cmd->add_option("--function", fn_file, "JSON file with lifted terms")->required();

    // fubini
    auto* fub_cmd = app.add_subcommand("fubini", "decide the shear Fubini question");
    fub_cmd->set_help_flag("--help", "print help");
    std::string h_str, data_str = "0,0,0,0", f_file;
    bool extended = false;
    fub_cmd->add_option("--h", h_str, "shear polynomial over F")->required();
    fub_cmd->add_option("--data", data_str, "a1,a2,n1,n2");
    fub_cmd->add_option("--f", f_file, "JSON file with the step function on K x K")->required();
    fub_cmd->add_flag("--extended", extended, "also evaluate a NOT_INTEGRABLE witness under the null convention (non-rigorous)");

    // oracle
    auto* orc_cmd = app.add_subcommand("oracle", "independent grid verification");
    orc_cmd->require_subcommand(1);
    std::string grid_str = "3:1";
    auto* od = orc_cmd->add_subcommand("verify-decomposition", "grid-check a decomposition");
    od->add_option("--q", q_str)->required();
    od->add_option("--b", b_str);
    od->add_option("--A", A)->required();
    od->add_option("--grid", grid_str, "t:u depths");
    auto* ol = orc_cmd->add_subcommand("verify-laws", "randomized integral laws");
    int samples = 100;
    ol->add_option("--samples", samples);
    auto* orp = orc_cmd->add_subcommand("verify-repeated", "grid-check both repeated integrals");
    orp->set_help_flag("--help", "print help");
    orp->add_option("--h", h_str)->required();
    orp->add_option("--f", f_file)->required();
    orp->add_option("--grid", grid_str, "t:u depths");

    // scenario
    auto* sc_cmd = app.add_subcommand("scenario", "run a bundled worked example");
    std::string sc_name, sc_dir = "scenarios";
    bool sc_list = false;
    sc_cmd->add_option("name", sc_name, "scenario name");
    sc_cmd->add_option("--dir", sc_dir, "scenario directory");
    sc_cmd->add_flag("--list", sc_list, "list available scenarios");

    for (CLI::App* sub : {dec_cmd, int_cmd, fub_cmd, orc_cmd, od, ol, orp, sc_cmd})
        sub->fallthrough(true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        FieldTowerSpec spec = FieldTowerSpec::parse(field_str);

        if (*dec_cmd) {
            FPoly q = parse_fpoly(spec, q_str);
            FElem b = parse_felem(spec, b_str);
            Decomposition dec = decompose_preimage(q, b, A, kprec);
            if (as_json)
                std::cout << decomposition_to_json(dec) << "\n";
            else
                std::cout << dec.str() << "\n";
            return 0;
        }
        if (*int_cmd) {
            IntegrableFunctionF g = integrable_from_json(spec, slurp(fn_file));
            RatFunc v = integral_F(g);
            if (as_json)
                std::cout << "{\"integral\": \"" << v.str() << "\"}\n";
            else
                std::cout << v.str() << "\n";
            return 0;
        }
        if (*fub_cmd) {
            ConjectureData data;
            data.h = parse_fpoly(spec, h_str);
            data.f = sbfunction2_from_json(spec, slurp(f_file));
            {
                std::stringstream ss(data_str);
                std::string tok;
                std::vector<std::string> parts;
                while (std::getline(ss, tok, ',')) parts.push_back(tok);
                if (parts.size() != 4) throw parse_error("--data needs a1,a2,n1,n2", 0);
                data.a1 = parse_felem(spec, parts[0]);
                data.a2 = parse_felem(spec, parts[1]);
                data.n1 = std::stoi(parts[2]);
                data.n2 = std::stoi(parts[3]);
            }
            DepthNormalization norm = normalize(data, kprec);
            FubiniVerdict v = classify_data(data, kprec);
            std::string out = verdict_to_json(v, norm.depth, norm.q);
            if (extended && v.kind == VerdictKind::not_integrable) {
                RatFunc ext = extended_null_convention(v);
                out.insert(out.rfind('}'), ",\n  \"extended\": \"" + ext.str() +
                                                "\",\n  \"extended_non_rigorous\": true\n");
            }
            if (as_json) {
                std::cout << out << "\n";
            } else {
                std::cout << "verdict: " << v.kind_str() << "\n";
                std::cout << "depth: " << norm.depth << "  normalised: " << norm.q.str()
                          << "\n";
                std::cout << "dydx = " << v.dydx.str() << "\n";
                if (v.dxdy) std::cout << "dxdy = " << v.dxdy->str() << "\n";
                if (extended && v.kind == VerdictKind::not_integrable)
                    std::cout << "extended (non-rigorous) = "
                              << extended_null_convention(v).str() << "\n";
            }
            return v.kind == VerdictKind::unknown ? 1 : 0;
        }
        if (*od) {
            auto [gt, gu] = parse_grid(grid_str);
            FPoly q = parse_fpoly(spec, q_str);
            FElem b = parse_felem(spec, b_str);
            Decomposition dec = decompose_preimage(q, b, A, kprec);
            OracleReport rep = verify_decomposition(q, b, A, dec, GridSpec{gt, gu}, kprec);
            std::cout << (rep.pass ? "PASS " : "FAIL ") << rep.detail << "\n";
            return rep.pass ? 0 : 1;
        }
        if (*ol) {
            OracleReport rep = verify_integral_laws(samples, seed, spec);
            std::cout << (rep.pass ? "PASS " : "FAIL ") << rep.detail << "\n";
            return rep.pass ? 0 : 1;
        }
        if (*orp) {
            auto [gt, gu] = parse_grid(grid_str);
            FPoly h = parse_fpoly(spec, h_str);
            SBFunction2 f = sbfunction2_from_json(spec, slurp(f_file));
            ConjectureData data{FElem::zero(spec), FElem::zero(spec), 0, 0, h, f};
            DepthNormalization norm = normalize(data, kprec);
            FubiniVerdict v = classify_data(data, kprec);
            RepeatedReport rep =
                verify_repeated(f, norm.depth, norm.q, GridSpec{gt, gu}, v.dydx, v.dxdy);
            std::cout << (rep.pass ? "PASS " : "FAIL ") << "dydx_sum="
                      << rep.dydx_sum.get_str() << " dxdy_sum=" << rep.dxdy_sum.get_str()
                      << " bound=" << rep.bound.get_str() << " at X=" << rep.x0.get_str()
                      << "\n";
            return rep.pass ? 0 : 1;
        }
        if (*sc_cmd) {
            if (sc_list) {
                for (const auto& n : list_scenarios(sc_dir)) std::cout << n << "\n";
                return 0;
            }
            if (sc_name.empty()) throw unknown_scenario("no scenario name given");
            ScenarioResult res = run_scenario(sc_name, sc_dir, kprec);
            if (as_json)
                std::cout << res.json << "\n";
            else
                std::cout << (res.pass ? "PASS " : "FAIL ") << res.name << "\n"
                          << res.detail;
            return res.pass ? 0 : 1;
        }
    } catch (const grid_too_large& e) {
        std::cerr << "resource exhausted: " << e.what() << "\n";
        return 3;
    } catch (const root_budget_exceeded& e) {
        std::cerr << "resource exhausted: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const unknown_scenario& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 2;
}
