// Command-line front end: verify a tau-function model against the identity
// suites, solve for a model and store it, or describe a stored model file.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <mckp/run.hpp>

namespace {

int cmd_verify(const std::string& config_path, std::string out_path) {
    std::ifstream cf(config_path);
    if (!cf) {
        std::cerr << "error: cannot open config '" << config_path << "'\n";
        return 2;
    }
    mckp::RunConfig cfg;
    try {
        cfg = mckp::parse_config(cf);
        mckp::validate_config(cfg);
    } catch (const mckp::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    if (out_path.empty()) out_path = cfg.out;
    try {
        mckp::TauFunction tau = mckp::make_solution(cfg);
        mckp::RunReport rep = mckp::run_suites(tau, cfg);
        std::cout << mckp::report_text(rep);
        if (!out_path.empty()) {
            std::ofstream of(out_path);
            if (!of) {
                std::cerr << "error: cannot write report '" << out_path << "'\n";
                return 2;
            }
            of << mckp::report_json(cfg, rep).dump(2) << "\n";
        }
        return rep.ok() ? 0 : 1;
    } catch (const mckp::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}

int cmd_solve(const std::string& config_path, const std::string& out_path) {
    std::ifstream cf(config_path);
    if (!cf) {
        std::cerr << "error: cannot open config '" << config_path << "'\n";
        return 2;
    }
    try {
        mckp::RunConfig cfg = mckp::parse_config(cf);
        mckp::validate_config(cfg);
        mckp::TauFunction tau = mckp::make_solution(cfg);
        std::ofstream of(out_path);
        if (!of) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 2;
        }
        tau.serialize(of);
        std::cout << "wrote " << out_path << " (n=" << tau.n() << " jmax=" << tau.jmax()
                  << " cutoff=" << tau.cutoff() << " radius=" << tau.radius() << ")\n";
        return 0;
    } catch (const mckp::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}

int cmd_describe(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "error: cannot open '" << path << "'\n";
        return 2;
    }
    try {
        mckp::TauFunction tau = mckp::TauFunction::deserialize(f);
        std::cout << "components: " << tau.n() << "\n"
                  << "time indices per component: " << tau.jmax() << "\n"
                  << "grade cutoff: " << tau.cutoff() << "\n"
                  << "charge radius: " << tau.radius() << " (" << tau.charges().size()
                  << " charges)\n";
        for (const mckp::Charge& s : tau.charges()) {
            const mckp::Series& t = tau.at(s);
            std::cout << "tau" << mckp::to_string(s) << ": " << t.terms().size()
                      << " terms";
            // Leading part of the jet: the first few stored monomials.
            int shown = 0;
            for (const auto& [m, c] : t.terms()) {
                std::cout << (shown ? " + " : ";  ") << mckp::to_string(c) << "*"
                          << mckp::to_string(m);
                if (++shown == 3) break;
            }
            if (static_cast<size_t>(shown) < t.terms().size()) std::cout << " + ...";
            std::cout << "\n";
        }
        return 0;
    } catch (const mckp::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multicomponent hierarchy identity checker"};
    app.require_subcommand(1);

    std::string config_path, out_path, model_path;

    CLI::App* verify = app.add_subcommand("verify", "run the identity suites");
    verify->add_option("--config", config_path, "run configuration file")->required();
    verify->add_option("--out", out_path, "JSON report path");

    CLI::App* solve = app.add_subcommand("solve", "construct a model and store it");
    solve->add_option("--config", config_path, "run configuration file")->required();
    solve->add_option("--out", out_path, "output model file")->required();

    CLI::App* describe = app.add_subcommand("describe", "summarize a stored model");
    describe->add_option("path", model_path, "model file")->required();

    CLI11_PARSE(app, argc, argv);

    if (verify->parsed()) return cmd_verify(config_path, out_path);
    if (solve->parsed()) return cmd_solve(config_path, out_path);
    return cmd_describe(model_path);
}
