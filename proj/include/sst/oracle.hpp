#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sst/sst_build.hpp"
#include "sst/suffix_sort.hpp"
#include "sst/text.hpp"

// Brute-force references. These deliberately share no logic with the
// fingerprint path: plain symbol scans, std::sort on direct suffix
// comparison, and root-to-leaf trie insertion.

namespace sst::oracle {

/// Largest n * b the oracles accept unless forced.
inline constexpr std::uint64_t work_guard = 100'000'000;

inline void check_guard(const Text& text, std::size_t b, bool force)
{
    if (!force && static_cast<std::uint64_t>(text.size()) * b > work_guard)
        throw InputError("oracle refused: n*b = " + std::to_string(text.size() * b) + " exceeds " +
                         std::to_string(work_guard));
}

inline Pos naive_lcp(const Text& text, Pos i, Pos j)
{
    check_position(text, i);
    check_position(text, j);
    const auto bytes = text.bytes();
    Pos k = 0;
    while (i - 1 + k < bytes.size() && j - 1 + k < bytes.size() && bytes[i - 1 + k] == bytes[j - 1 + k])
        ++k;
    return k;
}

namespace detail {

inline void check_positions(const Text& text, std::span<const Pos> positions)
{
    std::vector<bool> seen(text.size() + 1, false);
    for (Pos p : positions) {
        check_position(text, p);
        if (seen[p])
            throw InputError("duplicate position " + std::to_string(p));
        seen[p] = true;
    }
}

} // namespace detail

inline SparseSuffixArray naive_sort(const Text& text, std::span<const Pos> positions, bool force = false)
{
    detail::check_positions(text, positions);
    check_guard(text, positions.size(), force);
    const std::string_view s(reinterpret_cast<const char*>(text.bytes().data()), text.size());

    std::vector<Pos> order(positions.begin(), positions.end());
    std::sort(order.begin(), order.end(), [&](Pos a, Pos b) { return s.substr(a - 1) < s.substr(b - 1); });

    SparseSuffixArray out;
    out.n = text.size();
    out.sa.assign(order.begin(), order.end());
    for (std::size_t t = 0; t + 1 < order.size(); ++t)
        out.adj_lcp.push_back(naive_lcp(text, order[t], order[t + 1]));
    return out;
}

/// Inserts each suffix (plus terminator) from the root, splitting edges at
/// the first mismatch, then converts the trie to a SparseSuffixTree.
inline SparseSuffixTree naive_tree(const Text& text, std::span<const Pos> positions, bool force = false)
{
    detail::check_positions(text, positions);
    check_guard(text, positions.size(), force);
    const Pos n = text.size();
    // symbol at 1-based position k of T followed by the terminator at n+1
    auto symbol = [&](Pos k) -> int { return k == n + 1 ? -1 : static_cast<int>(text[k]); };

    struct TrieNode
    {
        Pos start = 0; // edge label = extended text [start, end]
        Pos end = 0;
        Pos depth = 0;
        Pos leaf = 0;
        std::map<int, std::size_t> children;
    };
    std::vector<TrieNode> trie(1);

    for (Pos q : positions) {
        std::size_t cur = 0;
        Pos k = q;
        for (;;) {
            const int c = symbol(k);
            auto it = trie[cur].children.find(c);
            if (it == trie[cur].children.end()) {
                TrieNode leaf;
                leaf.start = k;
                leaf.end = n + 1;
                leaf.depth = n - q + 2;
                leaf.leaf = q;
                trie.push_back(leaf);
                trie[cur].children[c] = trie.size() - 1;
                break;
            }
            const std::size_t child = it->second;
            const Pos edge_len = trie[child].end - trie[child].start + 1;
            Pos d = 0;
            while (d < edge_len && symbol(trie[child].start + d) == symbol(k + d))
                ++d;
            if (d == edge_len) {
                cur = child;
                k += d;
                continue;
            }
            TrieNode mid;
            mid.start = trie[child].start;
            mid.end = trie[child].start + d - 1;
            mid.depth = trie[cur].depth + d;
            trie.push_back(mid);
            const std::size_t mid_id = trie.size() - 1;
            trie[child].start += d;
            trie[mid_id].children[symbol(trie[child].start)] = child;
            trie[cur].children[c] = mid_id;
            cur = mid_id;
            k += d;
        }
    }

    SparseSuffixTree tree;
    tree.n = n;
    tree.b = positions.size();
    tree.add_node(SstNode{});
    std::vector<std::pair<std::size_t, NodeId>> stack{{0, SparseSuffixTree::root}};
    while (!stack.empty()) {
        const auto [from, to] = stack.back();
        stack.pop_back();
        std::vector<std::pair<std::size_t, NodeId>> kids;
        for (const auto& [c, child] : trie[from].children) {
            const TrieNode& t = trie[child];
            SstNode node;
            node.length = t.depth;
            node.leaf_pos = t.leaf;
            node.edge_start = t.start;
            node.terminated = t.end == n + 1;
            node.edge_end = node.terminated ? n : t.end;
            const NodeId id = tree.add_node(node);
            tree.append_child(to, id);
            kids.emplace_back(child, id);
        }
        stack.insert(stack.end(), kids.rbegin(), kids.rend());
    }
    return tree;
}

} // namespace sst::oracle
