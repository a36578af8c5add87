#include "mvfe/cli_run.hpp"
#include "mvfe/rational.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

// Split "NAME=VALUE"; throws on malformed input.
std::pair<std::string, std::string> split_assignment(const std::string& s,
                                                     const char* what) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
        throw mvfe::error(std::string(what) + " expects NAME=VALUE, got '" +
                          s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

long parse_long(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw mvfe::error(std::string(what) + " expects an integer, got '" +
                          text + "'");
    }
}

void apply_assignments(const std::vector<std::string>& raw_caps,
                       const std::vector<std::string>& raw_params,
                       const std::vector<std::string>& raw_spec,
                       mvfe::RunConfig& cfg) {
    for (const auto& s : raw_caps) {
        auto [name, value] = split_assignment(s, "--cap");
        long v = parse_long(value, "--cap");
        if (v < 0) throw mvfe::error("--cap must be nonnegative, got '" + s + "'");
        cfg.caps[name] = static_cast<std::uint32_t>(v);
    }
    for (const auto& s : raw_params) {
        auto [name, value] = split_assignment(s, "--param");
        cfg.params[name] = parse_long(value, "--param");
    }
    for (const auto& s : raw_spec) {
        auto [name, value] = split_assignment(s, "--specialize");
        cfg.specialize[name] = parse_long(value, "--specialize");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver for generating-function functional equations"};
    app.require_subcommand(1);

    mvfe::RunConfig cfg;
    std::vector<std::string> raw_caps, raw_params, raw_spec;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-m,--model", cfg.model,
                        "coin, mbm, polyomino, lmr, or file:<path>")
            ->required();
        cmd->add_option("-c,--cap", raw_caps,
                        "truncation cap VAR=N (repeatable)");
        cmd->add_option("-p,--param", raw_params,
                        "model parameter NAME=N (repeatable), e.g. L=2");
        cmd->add_option("-o,--out", cfg.out_path,
                        "write output to this file instead of stdout");
        cmd->add_option("-t,--threads", cfg.threads,
                        "worker threads for the solver")
            ->check(CLI::Range(1u, 64u));
    };

    CLI::App* solve = app.add_subcommand(
        "solve", "solve the model's functional equation and print the series");
    add_common(solve);
    solve->add_option("-f,--format", cfg.format, "human, csv, or json");
    solve->add_option("-s,--specialize", raw_spec,
                      "evaluate a variable at an integer, VAR=N (repeatable)");

    CLI::App* verify = app.add_subcommand(
        "verify", "run the model's self-checks and print a report");
    add_common(verify);

    CLI::App* table = app.add_subcommand(
        "table", "print a coefficient grid for two chosen variables");
    add_common(table);
    table->add_option("-f,--format", cfg.format, "human, csv, or json");
    table->add_option("-s,--specialize", raw_spec,
                      "evaluate a variable at an integer, VAR=N (repeatable)");
    table->add_option("-r,--rows", cfg.rows_var, "row variable (default x)");
    table->add_option("-C,--cols", cfg.cols_var,
                      "column variable (default q)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        apply_assignments(raw_caps, raw_params, raw_spec, cfg);
    } catch (const mvfe::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (solve->parsed()) cfg.command = "solve";
    if (verify->parsed()) cfg.command = "verify";
    if (table->parsed()) cfg.command = "table";
    return mvfe::run(cfg, std::cout, std::cerr);
}
