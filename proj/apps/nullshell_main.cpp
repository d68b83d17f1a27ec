#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nullshell/workbench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Null thin shells and impulsive waves: checks, reports and figure data"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_path;
    std::optional<double> lambda;
    std::optional<std::string> expr;
    std::optional<double> a, b, c, h0;
    std::optional<int> dim;
    std::optional<std::string> v_range, r_range, eps;

    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "write the report or CSV here instead of stdout");
    app.add_option("--lambda", lambda, "cosmological constant");
    app.add_option("--expr", expr, "jump function H(v, z2..zn)");
    app.add_option("--a", a, "example family a");
    app.add_option("--b", b, "example family b");
    app.add_option("--c", c, "example family c");
    app.add_option("--h0", h0, "example family h0");
    app.add_option("--dim", dim, "leaf dimension n");
    app.add_option("--v-range", v_range, "lo:hi:step");
    app.add_option("--r-range", r_range, "lo:hi:step");
    app.add_option("--eps", eps, "comma-separated decreasing eps list");
    // Options may follow the subcommand.
    app.fallthrough();
    for (const char* name : {"verify", "shell-report", "figure-data", "products", "parse", "schema"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    nullshell::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = nullshell::load_config(config_path);
        if (lambda) cfg.lambda = *lambda;
        if (dim) cfg.dim_n = *dim;
        if (expr) {
            cfg.jump_kind = "expression";
            cfg.expression = *expr;
        }
        if (a || b || c || h0) cfg.jump_kind = "example";
        if (a) cfg.example.a = *a;
        if (b) cfg.example.b = *b;
        if (c) cfg.example.c = *c;
        if (h0) cfg.example.h0 = *h0;
        if (v_range) cfg.v_range = nullshell::parse_range(*v_range);
        if (r_range) cfg.r_range = nullshell::parse_range(*r_range);
        if (eps) cfg.eps = nullshell::parse_list(*eps);
        if (!out_path.empty()) cfg.out = out_path;
    } catch (const std::exception& e) {
        std::cerr << "nullshell: " << e.what() << "\n";
        return 2;
    }

    const nullshell::RunResult result = nullshell::run(command, cfg);
    if (cfg.out) {
        std::ofstream out(*cfg.out, std::ios::binary);
        if (!out) {
            std::cerr << "nullshell: cannot write " << *cfg.out << "\n";
            return 2;
        }
        out << result.output;
    } else {
        std::cout << result.output;
    }
    for (const auto& check : result.checks)
        if (!check.pass) std::cerr << "FAILED " << check.name << " " << check.detail << "\n";
    return result.exit_code;
}
