#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sst/oracle.hpp"
#include "sst/sst.hpp"
#include "sst/workload.hpp"

// Subcommand bodies for the `sst` tool. Each returns a process exit code and
// writes only to the streams it is handed, so tests can drive them directly.

namespace sst::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_invalid_input = 1,
    exit_io_error = 2,
    exit_invariant = 3,
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    std::string text_path;
    /// File path or inline comma/newline separated list.
    std::string positions;
    /// When non-zero, generate this many positions instead of reading them.
    std::size_t random_positions = 0;
    std::string distribution = "uniform";
    std::string pairs_path;
    unsigned alpha = 2;
    std::uint64_t seed = 0;
    unsigned reps = 2;
    std::string format;
    bool zero_based = false;
    bool verify = false;
    bool force = false;
    /// Test-only: fixed moduli instead of random primes.
    std::vector<std::uint64_t> debug_primes;
};

struct BenchGrid
{
    std::vector<Pos> n;
    std::vector<std::size_t> b;
    std::vector<unsigned> alpha;
    unsigned sigma = 256;
    unsigned runs = 1;
};

// --- input -----------------------------------------------------------------

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("error reading " + path);
    return data;
}

/// Positions as decimal integers separated by commas or whitespace. Entries
/// are validated against [1, n] after the zero-based shift; errors name the
/// offending line when the list came from a file.
inline std::vector<Pos> parse_positions(std::string_view source, Pos n, bool zero_based, bool from_file)
{
    std::vector<Pos> out;
    std::vector<std::size_t> line_of;
    std::size_t line = 1;
    std::size_t k = 0;
    auto where = [&](std::size_t at) { return from_file ? " (line " + std::to_string(at) + ")" : std::string{}; };

    while (k < source.size()) {
        const char c = source[k];
        if (c == '\n') {
            ++line;
            ++k;
            continue;
        }
        if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
            ++k;
            continue;
        }
        std::size_t end = k;
        while (end < source.size() && source[end] != ',' && source[end] != '\n' && source[end] != ' ' &&
               source[end] != '\t' && source[end] != '\r')
            ++end;
        const std::string_view token = source.substr(k, end - k);
        if (!std::all_of(token.begin(), token.end(), [](char d) { return d >= '0' && d <= '9'; }) || token.size() > 18)
            throw InputError("invalid position '" + std::string(token) + "'" + where(line));
        Pos value = std::stoull(std::string(token));
        if (zero_based)
            ++value;
        if (value < 1 || value > n) {
            const Pos shown = zero_based ? value - 1 : value;
            const Pos lo = zero_based ? 0 : 1;
            const Pos hi = zero_based ? n - 1 : n;
            throw InputError("position " + std::to_string(shown) + " out of range [" + std::to_string(lo) + "," +
                             std::to_string(hi) + "]" + where(line));
        }
        out.push_back(value);
        line_of.push_back(line);
        k = end;
    }

    std::vector<std::size_t> index(out.size());
    for (std::size_t t = 0; t < index.size(); ++t)
        index[t] = t;
    std::stable_sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) { return out[a] < out[b]; });
    for (std::size_t t = 1; t < index.size(); ++t)
        if (out[index[t]] == out[index[t - 1]])
            throw InputError("duplicate position " + std::to_string(out[index[t]] - (zero_based ? 1 : 0)) +
                             where(line_of[index[t]]));
    return out;
}

/// One "i j" pair per non-blank line.
inline std::vector<SuffixPair> parse_pairs(std::string_view source, Pos n, bool zero_based)
{
    std::vector<SuffixPair> out;
    std::size_t line = 0;
    std::size_t k = 0;
    while (k <= source.size()) {
        std::size_t end = source.find('\n', k);
        if (end == std::string_view::npos)
            end = source.size();
        ++line;
        std::string text(source.substr(k, end - k));
        k = end + 1;
        if (text.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream in(text);
        long long i = -1, j = -1;
        std::string rest;
        if (!(in >> i >> j) || (in >> rest) || i < 0 || j < 0)
            throw InputError("line " + std::to_string(line) + ": malformed pair '" + text + "'");
        Pos pi = static_cast<Pos>(i) + (zero_based ? 1 : 0);
        Pos pj = static_cast<Pos>(j) + (zero_based ? 1 : 0);
        for (Pos p : {pi, pj})
            if (p < 1 || p > n)
                throw InputError("line " + std::to_string(line) + ": position " +
                                 std::to_string(zero_based ? p - 1 : p) + " out of range");
        out.emplace_back(pi, pj);
    }
    return out;
}

struct Input
{
    std::string bytes;
    Text text() const { return Text(std::string_view(bytes)); }
};

inline Input load_text(const RunConfig& config)
{
    if (config.text_path.empty())
        throw InputError("--text is required");
    return {read_file(config.text_path)};
}

inline std::vector<Pos> load_positions(const RunConfig& config, Pos n)
{
    if (config.random_positions != 0) {
        if (config.distribution == "uniform")
            return workload::random_positions(n, config.random_positions, config.seed);
        if (config.distribution == "even")
            return workload::evenly_spaced_positions(n, config.random_positions);
        throw InputError("unknown distribution '" + config.distribution + "'");
    }
    std::error_code ec;
    if (!config.positions.empty() && std::filesystem::is_regular_file(config.positions, ec))
        return parse_positions(read_file(config.positions), n, config.zero_based, true);
    return parse_positions(config.positions, n, config.zero_based, false);
}

inline FingerprintContext make_context(const RunConfig& config, Pos n)
{
    if (!config.debug_primes.empty())
        return FingerprintContext::with_primes(256, std::max<Pos>(n, 1), config.debug_primes);
    return FingerprintContext::create(256, std::max<Pos>(n, 1), config.seed, config.reps);
}

inline SortOptions sort_options(const RunConfig& config)
{
    SortOptions options;
    options.alpha = config.alpha;
    options.seed = config.seed;
    options.verify = config.verify;
    return options;
}

inline void check_config(const RunConfig& config)
{
    if (config.alpha < 2)
        throw InputError("--alpha must be at least 2");
    if (config.reps < 1)
        throw InputError("--reps must be at least 1");
}

// --- output ----------------------------------------------------------------

inline Pos external(Pos p, const RunConfig& config) { return config.zero_based ? p - 1 : p; }

inline void write_sa(std::ostream& out, const SparseSuffixArray& ssa, const RunConfig& config)
{
    const std::string format = config.format.empty() ? "text" : config.format;
    if (format == "text" || format == "csv") {
        const char sep = format == "csv" ? ',' : ' ';
        if (format == "csv")
            out << "position,lcp\n";
        for (std::size_t t = 0; t < ssa.sa.size(); ++t) {
            out << external(ssa.sa[t], config) << sep;
            if (t == 0)
                out << '-';
            else
                out << ssa.adj_lcp[t - 1];
            out << '\n';
        }
    } else if (format == "json") {
        nlohmann::ordered_json j;
        j["n"] = ssa.n;
        j["sa"] = nlohmann::json::array();
        for (Pos p : ssa.sa)
            j["sa"].push_back(external(p, config));
        j["adj_lcp"] = std::vector<Pos>(ssa.adj_lcp.begin(), ssa.adj_lcp.end());
        out << j.dump(2) << '\n';
    } else {
        throw InputError("format '" + format + "' not supported for build-sa");
    }
}

inline nlohmann::ordered_json tree_to_json(const SparseSuffixTree& tree, const RunConfig& config)
{
    auto node_json = [&](NodeId id) {
        const SstNode& node = tree[id];
        nlohmann::ordered_json j;
        j["length"] = node.length;
        if (id != SparseSuffixTree::root) {
            if (node.edge_start <= node.edge_end)
                j["edge"] = {{"start", external(node.edge_start, config)}, {"end", external(node.edge_end, config)}};
            j["terminator"] = node.terminated;
        }
        if (node.is_leaf())
            j["leaf_pos"] = external(node.leaf_pos, config);
        j["children"] = nlohmann::ordered_json::array();
        return j;
    };

    // built bottom-up so deep trees do not recurse
    std::vector<nlohmann::ordered_json> built(tree.nodes.size());
    walk_tree(
        tree, [&](NodeId id) { built[id] = node_json(id); },
        [&](NodeId id) {
            const NodeId parent = tree[id].parent;
            if (parent != no_node && id != SparseSuffixTree::root)
                built[parent]["children"].push_back(std::move(built[id]));
        });

    nlohmann::ordered_json doc;
    doc["n"] = tree.n;
    doc["b"] = tree.b;
    doc["root"] = std::move(built[SparseSuffixTree::root]);
    return doc;
}

inline std::string dot_escape(std::string_view label)
{
    std::string out;
    for (char c : label) {
        const auto byte = static_cast<unsigned char>(c);
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (byte < 0x20 || byte >= 0x7f) {
            static constexpr char hex[] = "0123456789abcdef";
            out += "\\\\x";
            out += hex[byte >> 4];
            out += hex[byte & 15];
        } else {
            out += c;
        }
    }
    return out;
}

inline void write_tree(std::ostream& out, const SparseSuffixTree& tree, const Text& text, const RunConfig& config)
{
    const std::string format = config.format.empty() ? "json" : config.format;
    if (format == "json") {
        out << tree_to_json(tree, config).dump(2) << '\n';
    } else if (format == "dot") {
        constexpr Pos max_label = 24;
        out << "digraph sst {\n  node [shape=circle];\n";
        for (NodeId id = 0; id < tree.nodes.size(); ++id) {
            const SstNode& node = tree[id];
            if (node.is_leaf())
                out << "  n" << id << " [shape=box,label=\"" << external(node.leaf_pos, config) << "\"];\n";
            else
                out << "  n" << id << " [label=\"" << node.length << "\"];\n";
        }
        for (NodeId id = 1; id < tree.nodes.size(); ++id) {
            const SstNode& node = tree[id];
            std::string label;
            if (node.edge_start <= node.edge_end) {
                const Pos end = std::min(node.edge_end, node.edge_start + max_label - 1);
                label = dot_escape(text.substr(node.edge_start, end));
                if (end < node.edge_end)
                    label += "...";
            }
            if (node.terminated)
                label += "$";
            out << "  n" << node.parent << " -> n" << id << " [label=\"" << label << "\"];\n";
        }
        out << "}\n";
    } else if (format == "text") {
        out << shape_signature(tree, text) << '\n';
    } else {
        throw InputError("format '" + format + "' not supported for build-tree");
    }
}

// --- commands --------------------------------------------------------------

/// Maps library exceptions to exit codes and reports them on `err`.
inline int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid_input;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_invariant;
    }
}

inline int cmd_build_sa(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_config(config);
        const Input input = load_text(config);
        const Text text = input.text();
        const std::vector<Pos> positions = load_positions(config, text.size());
        SparseSuffixArray ssa;
        ssa.n = text.size();
        if (!positions.empty())
            ssa = sort_suffixes(text, positions, make_context(config, text.size()), sort_options(config));
        write_sa(out, ssa, config);
        return exit_ok;
    });
}

inline int cmd_build_tree(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_config(config);
        const Input input = load_text(config);
        const Text text = input.text();
        const std::vector<Pos> positions = load_positions(config, text.size());
        SparseSuffixArray ssa;
        ssa.n = text.size();
        if (!positions.empty())
            ssa = sort_suffixes(text, positions, make_context(config, text.size()), sort_options(config));
        const SparseSuffixTree tree = build_tree(text, ssa);
        if (config.verify) {
            const auto issues = validate_tree(tree, text, ssa);
            if (!issues.empty())
                throw InvariantError("tree validation failed: " + issues.front());
        }
        write_tree(out, tree, text, config);
        return exit_ok;
    });
}

inline int cmd_lcp(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_config(config);
        const Input input = load_text(config);
        const Text text = input.text();
        if (config.pairs_path.empty())
            throw InputError("--pairs is required");
        const auto pairs = parse_pairs(read_file(config.pairs_path), text.size(), config.zero_based);
        if (pairs.empty())
            return exit_ok;
        LcpOptions options;
        options.alpha = config.alpha;
        options.verify = config.verify;
        const LcpBatchResult result = batch_lcp(text, pairs, make_context(config, text.size()), options);
        for (Pos v : result.lcp)
            out << v << '\n';
        return exit_ok;
    });
}

/// Runs the fingerprint path and the brute-force oracle on the same input and
/// reports the first divergence. Checks the sorted order, the adjacent LCPs
/// and the tree for --positions, and the LCP values for --pairs.
inline int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_config(config);
        const Input input = load_text(config);
        const Text text = input.text();
        const bool has_positions = !config.positions.empty() || config.random_positions != 0;
        if (!has_positions && config.pairs_path.empty())
            throw InputError("verify needs --positions, --random-positions or --pairs");
        const FingerprintContext ctx = make_context(config, text.size());
        bool agree = true;

        if (has_positions) {
            const std::vector<Pos> positions = load_positions(config, text.size());
            oracle::check_guard(text, positions.size(), config.force);
            const SparseSuffixArray expected = oracle::naive_sort(text, positions, config.force);
            SparseSuffixArray got;
            got.n = text.size();
            if (!positions.empty())
                got = sort_suffixes(text, positions, ctx, sort_options(config));
            for (std::size_t t = 0; t < expected.sa.size() && agree; ++t) {
                if (got.sa[t] != expected.sa[t]) {
                    out << "sa: rank " << t << " differs: got " << external(got.sa[t], config) << ", expected "
                        << external(expected.sa[t], config) << '\n';
                    agree = false;
                }
            }
            for (std::size_t t = 0; t < expected.adj_lcp.size() && agree; ++t) {
                if (got.adj_lcp[t] != expected.adj_lcp[t]) {
                    out << "adj_lcp: rank " << t << " differs: got " << got.adj_lcp[t] << ", expected "
                        << expected.adj_lcp[t] << '\n';
                    agree = false;
                }
            }
            if (agree) {
                out << "sa: ok (" << positions.size() << " suffixes)\n";
                const SparseSuffixTree tree = build_tree(text, got);
                const auto issues = validate_tree(tree, text, got);
                const SparseSuffixTree reference = oracle::naive_tree(text, positions, config.force);
                if (!issues.empty()) {
                    out << "tree: " << issues.front() << '\n';
                    agree = false;
                } else if (shape_signature(tree, text) != shape_signature(reference, text)) {
                    out << "tree: shape differs from naive insertion\n";
                    agree = false;
                } else {
                    out << "tree: ok (" << tree.nodes.size() << " nodes)\n";
                }
            }
        }

        if (agree && !config.pairs_path.empty()) {
            const auto pairs = parse_pairs(read_file(config.pairs_path), text.size(), config.zero_based);
            oracle::check_guard(text, pairs.size(), config.force);
            LcpOptions options;
            options.alpha = config.alpha;
            const LcpBatchResult got = batch_lcp(text, pairs, ctx, options);
            for (std::size_t p = 0; p < pairs.size() && agree; ++p) {
                const Pos expected = oracle::naive_lcp(text, pairs[p].first, pairs[p].second);
                if (got.lcp[p] != expected) {
                    out << "lcp: pair " << p + 1 << " (" << external(pairs[p].first, config) << ","
                        << external(pairs[p].second, config) << ") differs: got " << got.lcp[p] << ", expected "
                        << expected << '\n';
                    agree = false;
                }
            }
            if (agree)
                out << "lcp: ok (" << pairs.size() << " pairs)\n";
        }
        return agree ? exit_ok : exit_invariant;
    });
}

struct BenchRow
{
    Pos n = 0;
    std::size_t b = 0;
    unsigned alpha = 0;
    unsigned rounds = 0;
    double wall_ms = 0;
    std::size_t peak_aux_words = 0;
};

/// Generates a random text and position set, builds the tree, and measures
/// the maximum rounds of any batched LCP call, wall time, and peak auxiliary
/// words. Wall time is the median over `runs`.
inline BenchRow bench_cell(Pos n, std::size_t b, unsigned alpha, unsigned sigma, std::uint64_t seed, unsigned reps,
                           unsigned runs)
{
    const std::string bytes = workload::random_text(n, sigma, seed);
    const Text text(bytes);
    const std::vector<Pos> positions = workload::random_positions(n, b, seed);
    const FingerprintContext ctx = FingerprintContext::create(256, n, seed, reps);

    BenchRow row{n, positions.size(), alpha, 0, 0, 0};
    std::vector<double> times;
    for (unsigned run = 0; run < std::max(1U, runs); ++run) {
        aux::Meter meter;
        SortStats stats;
        const auto start = std::chrono::steady_clock::now();
        {
            aux::Scope scope(meter);
            const SparseSuffixArray ssa = sort_suffixes(text, positions, ctx, alpha, seed, &stats);
            const SparseSuffixTree tree = build_tree(text, ssa);
        }
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        row.rounds = stats.max_rounds;
        row.peak_aux_words = meter.peak_words();
    }
    std::sort(times.begin(), times.end());
    row.wall_ms = times[times.size() / 2];
    return row;
}

inline constexpr std::string_view bench_header = "n,b,alpha,rounds,wall_ms,peak_aux_words";

inline int cmd_bench(const RunConfig& config, const BenchGrid& grid, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (grid.n.empty() || grid.b.empty() || grid.alpha.empty())
            throw InputError("bench needs at least one value for each of --n, --b, --alpha");
        for (unsigned a : grid.alpha)
            if (a < 2)
                throw InputError("--alpha must be at least 2");
        if (grid.sigma < 2 || grid.sigma > 256)
            throw InputError("--sigma must be in [2, 256]");
        out << bench_header << '\n';
        for (Pos n : grid.n) {
            if (n < 1)
                throw InputError("--n values must be positive");
            for (std::size_t b : grid.b) {
                for (unsigned alpha : grid.alpha) {
                    const BenchRow row = bench_cell(n, b, alpha, grid.sigma, config.seed, config.reps, grid.runs);
                    out << row.n << ',' << row.b << ',' << row.alpha << ',' << row.rounds << ',' << std::fixed
                        << std::setprecision(3) << row.wall_ms << ',' << row.peak_aux_words << '\n';
                    out << std::defaultfloat;
                }
            }
        }
        return exit_ok;
    });
}

} // namespace sst::cli
