#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_shared(CLI::App& cmd, sst::cli::RunConfig& config, bool positions)
{
    cmd.add_option("--text", config.text_path, "Text file (raw bytes)")->required();
    if (positions) {
        cmd.add_option("--positions", config.positions, "Positions file or inline list, e.g. \"1,3,5\"");
        cmd.add_option("--random-positions", config.random_positions, "Generate this many positions instead");
        cmd.add_option("--distribution", config.distribution, "Generated positions: uniform or even")
            ->check(CLI::IsMember({"uniform", "even"}));
    }
    cmd.add_option("--alpha", config.alpha, "Branching factor of the LCP search")->capture_default_str();
    cmd.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    cmd.add_option("--reps", config.reps, "Independent fingerprint primes")->capture_default_str();
    cmd.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"text", "csv", "json", "dot"}));
    cmd.add_flag("--zero-based", config.zero_based, "Positions are 0-based on input and output");
    cmd.add_flag("--verify", config.verify, "Run internal consistency checks");
    cmd.add_option("--debug-prime", config.debug_primes, "Fixed fingerprint modulus (testing only)")->group("");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse suffix array and sparse suffix tree construction in O(b) working space"};
    app.require_subcommand(1);

    sst::cli::RunConfig config;
    sst::cli::BenchGrid grid;
    std::string out_path;

    auto* build_sa = app.add_subcommand("build-sa", "Sort the chosen suffixes");
    add_shared(*build_sa, config, true);
    build_sa->add_option("--out", out_path, "Output file");

    auto* build_tree = app.add_subcommand("build-tree", "Build the sparse suffix tree (json, dot or text)");
    add_shared(*build_tree, config, true);
    build_tree->add_option("--out", out_path, "Output file");

    auto* lcp = app.add_subcommand("lcp", "Batched LCP of suffix pairs");
    add_shared(*lcp, config, false);
    lcp->add_option("--pairs", config.pairs_path, "File with one \"i j\" pair per line")->required();
    lcp->add_option("--out", out_path, "Output file");

    auto* verify = app.add_subcommand("verify", "Compare against brute-force references");
    add_shared(*verify, config, true);
    verify->add_option("--pairs", config.pairs_path, "File with one \"i j\" pair per line");
    verify->add_flag("--force", config.force, "Run the references even above the size guard");
    verify->add_option("--out", out_path, "Output file");

    auto* bench = app.add_subcommand("bench", "CSV of rounds, time and working space over a grid");
    bench->add_option("--n", grid.n, "Text lengths")->delimiter(',')->required();
    bench->add_option("--b", grid.b, "Numbers of suffixes")->delimiter(',')->required();
    bench->add_option("--alpha", grid.alpha, "Branching factors")->delimiter(',')->default_val(std::vector<unsigned>{2});
    bench->add_option("--sigma", grid.sigma, "Alphabet size of generated texts")->capture_default_str();
    bench->add_option("--runs", grid.runs, "Timed runs per cell (median reported)")->capture_default_str();
    bench->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    bench->add_option("--reps", config.reps, "Independent fingerprint primes")->capture_default_str();
    bench->add_option("--out", out_path, "Output file");

    CLI11_PARSE(app, argc, argv);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open " << out_path << " for writing\n";
            return sst::cli::exit_io_error;
        }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    int code = sst::cli::exit_ok;
    if (*build_sa)
        code = sst::cli::cmd_build_sa(config, out, std::cerr);
    else if (*build_tree)
        code = sst::cli::cmd_build_tree(config, out, std::cerr);
    else if (*lcp)
        code = sst::cli::cmd_lcp(config, out, std::cerr);
    else if (*verify)
        code = sst::cli::cmd_verify(config, out, std::cerr);
    else if (*bench)
        code = sst::cli::cmd_bench(config, grid, out, std::cerr);

    out.flush();
    if (!out) {
        std::cerr << "error: write failed\n";
        return sst::cli::exit_io_error;
    }
    return code;
}
