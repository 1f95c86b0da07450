// looplab: verification sweeps for the dense and dilute loop models.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <looplab/looplab.hpp>

using namespace looplab;

namespace {

const char* grid_help =
    "Grids: start:stop:step (start included, stop included when reached within 1e-9 of a step, "
    "never exceeded), a comma list a,b,c, or a single value.";

struct Common {
    std::string out = "table";
    std::uint64_t seed = 1;
    double tol = 1e-10;
    std::vector<std::string> perturb;
    std::uint64_t max_configs = 0;
    bool timing = false;
    int threads = 0;
};

void add_common(CLI::App* c, Common& o) {
    c->add_option("--out", o.out, "Output format: json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    c->add_option("--seed", o.seed, "Seed recorded in the report (and used for random draws)");
    c->add_option("--tol", o.tol, "Residual threshold");
    c->add_option("--perturb", o.perturb, "key:factor, key in t,u1,u2,v,a,b (scale) or sigma (shift); repeatable");
    c->add_option("--max-configs", o.max_configs, "Enumeration cap (default: LOOPLAB_MAX_CONFIGS or 1e8)");
    c->add_option("--threads", o.threads, "Worker threads (0: hardware)");
    c->add_flag("--timing", o.timing, "Record wall time in the report (breaks byte-identical output)");
}

std::uint64_t cap_of(const Common& c) { return c.max_configs ? c.max_configs : default_config_cap(); }

Perturbation perturbation_of(const Common& c) {
    Perturbation p;
    for (auto& s : c.perturb) parse_perturbation(s, p);
    return p;
}

void emit(const ResidualReport& r, const std::string& fmt) {
    if (fmt == "json")
        std::cout << r.to_json().dump(2) << "\n";
    else if (fmt == "csv")
        std::cout << r.to_csv();
    else
        std::cout << r.to_table();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"looplab: discrete holomorphicity, Yang-Baxter and Z-invariance checks for O(n) loop models"};
    app.require_subcommand(1);
    app.footer(grid_help);

    Common vc;
    std::string model, alpha = "0.1:3.0:0.1", beta = "0.1:3.0:0.1", hex_beta = "1.9,2.3", lambda = "0.1:1.5:0.1",
                       eta = "0.05:0.75:0.05", ell, precision = "double";
    auto* verify = app.add_subcommand("verify", "Run every residual check over a parameter grid");
    verify->add_option("model", model, "dense or dilute")->required()->check(CLI::IsMember({"dense", "dilute"}));
    verify->add_option("--alpha", alpha, "Opening-angle grid");
    verify->add_option("--beta", beta, "Second-angle grid for pair and Yang-Baxter checks");
    verify->add_option("--hex-beta", hex_beta, "Second-angle grid for hexagon enumeration");
    verify->add_option("--lambda", lambda, "Dense crossing-parameter grid");
    verify->add_option("--eta", eta, "Dilute crossing-parameter grid");
    verify->add_option("--ell", ell, "Branch grid (dense default 0,1; dilute only 0)");
    verify->add_option("--precision", precision, "double or high (50 digits for closed forms)")
        ->check(CLI::IsMember({"double", "high"}));
    add_common(verify, vc);

    Common zc;
    ZinvOptions zo;
    std::string zmodel = "dense", dump;
    auto* zinv = app.add_subcommand("zinv", "Compare a domain with its image under a star-triangle move");
    zinv->add_option("model", zmodel, "dense or dilute")->check(CLI::IsMember({"dense", "dilute"}));
    zinv->add_option("--domain", zo.domain, "Builtin (hexagon, hexagon4, hexagon5, hexagon6) or a JSON file");
    zinv->add_option("--alpha", zo.alpha, "Builtin hexagon angle alpha");
    zinv->add_option("--beta", zo.beta, "Builtin hexagon angle beta");
    zinv->add_option("--lambda", zo.lambda, "Dense crossing parameter");
    zinv->add_option("--ell", zo.ell, "Dense branch");
    zinv->add_option("--eta", zo.eta, "Dilute crossing parameter");
    zinv->add_option("--dump-configs", dump, "Write one line per configuration of the first domain to this file");
    add_common(zinv, zc);

    Common ac;
    AppendixOptions ao;
    double a_alpha = 0, a_beta = 0, a_eta = 0;
    auto* appx = app.add_subcommand("appendix", "Elimination-chain statistics for the dilute hexagon system");
    appx->add_option("--draws", ao.draws, "Number of random (alpha, beta, eta) draws");
    auto* oa = appx->add_option("--alpha", a_alpha, "Fix alpha");
    auto* ob = appx->add_option("--beta", a_beta, "Fix beta");
    auto* oe = appx->add_option("--eta", a_eta, "Fix eta");
    appx->add_option("--fit-samples", ao.fit_samples, "Random weight samples for the single-draw fit");
    add_common(appx, ac);
    ac.seed = 7;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (*verify) {
            VerifyOptions o;
            o.model = model == "dense" ? Model::dense : Model::dilute;
            o.alpha = parse_grid(alpha);
            o.beta = parse_grid(beta);
            o.hex_beta = parse_grid(hex_beta);
            o.lambda = parse_grid(lambda);
            o.eta = parse_grid(eta);
            o.ell = ell.empty() ? (o.model == Model::dense ? std::vector<int>{0, 1} : std::vector<int>{0})
                                : parse_int_grid(ell);
            o.tol = vc.tol;
            o.pert = perturbation_of(vc);
            o.high = precision == "high";
            o.seed = vc.seed;
            o.cap = cap_of(vc);
            o.threads = vc.threads;
            auto rep = run_verify(o);
            if (vc.timing) rep.set_meta("wall_time_s", ResidualReport::num(seconds_since(t0)));
            emit(rep, vc.out);
            return rep.pass() ? 0 : 1;
        }
        if (*zinv) {
            zo.model = zmodel == "dense" ? Model::dense : Model::dilute;
            zo.tol = zc.tol;
            zo.pert = perturbation_of(zc);
            zo.cap = cap_of(zc);
            zo.seed = zc.seed;
            std::ofstream df;
            if (!dump.empty()) {
                df.open(dump);
                if (!df) throw usage_error("cannot open " + dump);
            }
            auto z = run_zinv(zo, dump.empty() ? nullptr : &df);
            if (zc.timing) z.report.set_meta("wall_time_s", ResidualReport::num(seconds_since(t0)));
            if (zc.out == "csv")
                std::cout << zinv_csv(z);
            else if (zc.out == "json") {
                auto j = z.report.to_json();
                j["diagrams"] = nlohmann::ordered_json::array();
                for (auto& r : z.rows)
                    j["diagrams"].push_back(
                        {{"diagram", r.diagram.encode()}, {"P_star", r.p1}, {"P_triangle", r.p2}, {"abs_diff", r.diff()}});
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << zinv_csv(z) << "\n" << z.report.to_table();
            }
            return z.report.pass() ? 0 : 1;
        }
        if (*appx) {
            if (oa->count()) ao.alpha = a_alpha;
            if (ob->count()) ao.beta = a_beta;
            if (oe->count()) ao.eta = a_eta;
            ao.seed = ac.seed;
            ao.tol = ac.tol;
            ao.threads = ac.threads;
            auto r = run_appendix(ao);
            if (ac.timing) r.json["wall_time_s"] = seconds_since(t0);
            if (ac.out == "csv") {
                std::cout << "draws,trivial_nullspace,degenerate,max_row_residual,pass\n"
                          << r.json["draws"].dump() << "," << r.json["trivial_nullspace"].dump() << ","
                          << r.json["degenerate"].size() << "," << r.json["max_row_residual"].dump() << ","
                          << (r.pass ? "pass" : "FAIL") << "\n";
            } else {
                std::cout << r.json.dump(2) << "\n";
            }
            return r.pass ? 0 : 1;
        }
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const embedding_invalid_error& e) {
        std::fprintf(stderr, "invalid domain: %s\n", e.what());
        return 2;
    } catch (const resource_limit_error& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
