#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sst/aux_memory.hpp"
#include "sst/suffix_sort.hpp"
#include "sst/text.hpp"

// Sparse suffix tree over the chosen suffixes, each conceptually followed by
// a unique terminator that sorts before every byte. The terminator never
// occupies memory; leaf edges carry a flag instead.

namespace sst {

using NodeId = std::uint32_t;
inline constexpr NodeId no_node = std::numeric_limits<NodeId>::max();

/// Edge first-symbol key: the terminator is -1, bytes are 0..255.
using EdgeSymbol = int;
inline constexpr EdgeSymbol terminator_symbol = -1;

struct SstNode
{
    /// String depth from the root; for leaves this includes the terminator.
    Pos length = 0;
    /// Suffix start for leaves, 0 for internal nodes.
    Pos leaf_pos = 0;
    /// Label of the edge entering this node: T[edge_start..edge_end]
    /// (empty when edge_start > edge_end), then the terminator if `terminated`.
    Pos edge_start = 0;
    Pos edge_end = 0;
    bool terminated = false;

    NodeId parent = no_node;
    NodeId first_child = no_node;
    NodeId last_child = no_node;
    NodeId prev_sibling = no_node;
    NodeId next_sibling = no_node;

    bool is_leaf() const { return leaf_pos != 0; }
    Pos edge_length() const { return (edge_start <= edge_end ? edge_end - edge_start + 1 : 0) + (terminated ? 1 : 0); }
};

struct SparseSuffixTree
{
    static constexpr NodeId root = 0;

    aux::vector<SstNode> nodes;
    Pos n = 0;
    std::size_t b = 0;

    const SstNode& operator[](NodeId id) const { return nodes[id]; }
    SstNode& operator[](NodeId id) { return nodes[id]; }

    NodeId add_node(const SstNode& node)
    {
        nodes.push_back(node);
        return static_cast<NodeId>(nodes.size() - 1);
    }

    /// Appends `child` as the last child of `parent`.
    void append_child(NodeId parent, NodeId child)
    {
        SstNode& p = nodes[parent];
        SstNode& c = nodes[child];
        c.parent = parent;
        c.prev_sibling = p.last_child;
        c.next_sibling = no_node;
        if (p.last_child != no_node)
            nodes[p.last_child].next_sibling = child;
        else
            p.first_child = child;
        p.last_child = child;
    }

    /// Puts `replacement` where `old` sits in its parent's child list; `old`
    /// is left detached.
    void replace_child(NodeId old, NodeId replacement)
    {
        SstNode& o = nodes[old];
        SstNode& r = nodes[replacement];
        r.parent = o.parent;
        r.prev_sibling = o.prev_sibling;
        r.next_sibling = o.next_sibling;
        SstNode& p = nodes[o.parent];
        if (o.prev_sibling != no_node)
            nodes[o.prev_sibling].next_sibling = replacement;
        else
            p.first_child = replacement;
        if (o.next_sibling != no_node)
            nodes[o.next_sibling].prev_sibling = replacement;
        else
            p.last_child = replacement;
        o.parent = o.prev_sibling = o.next_sibling = no_node;
    }

    std::size_t child_count(NodeId id) const
    {
        std::size_t count = 0;
        for (NodeId c = nodes[id].first_child; c != no_node; c = nodes[c].next_sibling)
            ++count;
        return count;
    }
};

inline EdgeSymbol edge_first_symbol(const Text& text, const SstNode& node)
{
    if (node.edge_start <= node.edge_end)
        return text[node.edge_start];
    return node.terminated ? terminator_symbol : std::numeric_limits<EdgeSymbol>::min();
}

/// Iterative pre/post-order walk; children visited in stored order.
template <typename Enter, typename Leave>
void walk_tree(const SparseSuffixTree& tree, Enter&& enter, Leave&& leave)
{
    if (tree.nodes.empty())
        return;
    std::vector<NodeId> stack{SparseSuffixTree::root};
    enter(SparseSuffixTree::root);
    while (!stack.empty()) {
        const NodeId top = stack.back();
        // stack holds the current path; the next node to visit is either the
        // first child of top, or the next sibling after returning
        NodeId next = tree[top].first_child;
        if (next != no_node) {
            stack.push_back(next);
            enter(next);
            continue;
        }
        for (;;) {
            const NodeId done = stack.back();
            stack.pop_back();
            leave(done);
            if (stack.empty())
                return;
            const NodeId sibling = tree[done].next_sibling;
            if (sibling != no_node) {
                stack.push_back(sibling);
                enter(sibling);
                break;
            }
        }
    }
}

/// Leaves in DFS order together with the string depth of the LCA of each
/// consecutive pair of leaves.
inline SparseSuffixArray collect_leaves(const SparseSuffixTree& tree)
{
    SparseSuffixArray out;
    out.n = tree.n;
    Pos pending = 0;
    walk_tree(
        tree,
        [&](NodeId id) {
            const SstNode& node = tree[id];
            if (!node.is_leaf())
                return;
            if (!out.sa.empty())
                out.adj_lcp.push_back(pending);
            out.sa.push_back(node.leaf_pos);
        },
        [&](NodeId id) {
            const NodeId parent = tree[id].parent;
            if (parent != no_node)
                pending = tree[parent].length;
        });
    return out;
}

namespace detail {

inline NodeId attach_leaf(SparseSuffixTree& tree, NodeId parent, Pos q)
{
    SstNode leaf;
    leaf.leaf_pos = q;
    leaf.length = tree.n - q + 2;
    leaf.edge_start = q + tree[parent].length;
    leaf.edge_end = tree.n;
    leaf.terminated = true;
    const NodeId id = tree.add_node(leaf);
    tree.append_child(parent, id);
    return id;
}

} // namespace detail

/// Builds the tree by a simulated DFS: suffixes are inserted in sorted order
/// and each one hangs off the rightmost path at string depth adj_lcp, splitting
/// an edge when no node sits at that depth. Every node is pushed onto and
/// popped off the rightmost-path stack at most once.
inline SparseSuffixTree build_tree(const Text& text, const SparseSuffixArray& ssa)
{
    if (ssa.sa.size() >= 1 && ssa.adj_lcp.size() + 1 != ssa.sa.size())
        throw InputError("suffix array has " + std::to_string(ssa.sa.size()) + " entries but " +
                         std::to_string(ssa.adj_lcp.size()) + " adjacent LCPs");

    SparseSuffixTree tree;
    tree.n = text.size();
    tree.b = ssa.sa.size();
    tree.nodes.reserve(2 * ssa.sa.size() + 1);
    tree.add_node(SstNode{});
    if (ssa.sa.empty())
        return tree;

    aux::vector<NodeId> path;
    path.reserve(ssa.sa.size() + 1);
    path.push_back(SparseSuffixTree::root);
    check_position(text, ssa.sa[0]);
    path.push_back(detail::attach_leaf(tree, SparseSuffixTree::root, ssa.sa[0]));

    for (std::size_t t = 1; t < ssa.sa.size(); ++t) {
        const Pos prev = ssa.sa[t - 1];
        const Pos q = ssa.sa[t];
        const Pos lcp = ssa.adj_lcp[t - 1];
        check_position(text, q);
        if (lcp > std::min(text.suffix_length(prev), text.suffix_length(q)))
            throw InputError("adjacent LCP " + std::to_string(lcp) + " exceeds a suffix length at rank " +
                             std::to_string(t));

        NodeId below = no_node;
        while (tree[path.back()].length > lcp) {
            below = path.back();
            path.pop_back();
        }
        NodeId parent = path.back();
        if (tree[parent].length < lcp) {
            // split the edge into `below` at string depth lcp
            SstNode inner;
            inner.length = lcp;
            inner.edge_start = prev + tree[parent].length;
            inner.edge_end = prev + lcp - 1;
            const NodeId u = tree.add_node(inner);
            tree.replace_child(below, u);
            tree[below].edge_start += lcp - tree[parent].length;
            tree.append_child(u, below);
            path.push_back(u);
            parent = u;
        }

        const NodeId sibling = tree[parent].last_child;
        const NodeId leaf = detail::attach_leaf(tree, parent, q);
        if (sibling != no_node && edge_first_symbol(text, tree[sibling]) >= edge_first_symbol(text, tree[leaf]))
            throw InputError("suffix array out of order at rank " + std::to_string(t));
        path.push_back(leaf);
    }
    return tree;
}

/// Checks every structural invariant of `tree` against `text` and `ssa`.
/// Returns one message per violation; empty means valid.
///
/// Edge labels of internal nodes are compared symbol by symbol against every
/// leaf below them, so the cost is the sum over leaves of their parent's
/// string depth.
inline std::vector<std::string> validate_tree(const SparseSuffixTree& tree, const Text& text,
                                              const SparseSuffixArray& ssa)
{
    std::vector<std::string> issues;
    auto report = [&](NodeId id, const std::string& what) {
        issues.push_back("node " + std::to_string(id) + ": " + what);
    };
    const Pos n = text.size();

    if (tree.nodes.empty()) {
        issues.emplace_back("tree has no root");
        return issues;
    }
    if (tree[SparseSuffixTree::root].length != 0)
        report(SparseSuffixTree::root, "root length is not 0");
    if (tree.n != n)
        issues.push_back("tree built for n=" + std::to_string(tree.n) + ", text has n=" + std::to_string(n));

    std::size_t leaves = 0;
    std::vector<NodeId> reached;
    walk_tree(
        tree, [&](NodeId id) { reached.push_back(id); }, [](NodeId) {});

    for (NodeId id : reached) {
        const SstNode& node = tree[id];
        const std::size_t children = tree.child_count(id);

        if (node.is_leaf()) {
            ++leaves;
            if (children != 0)
                report(id, "leaf has children");
            if (node.leaf_pos < 1 || node.leaf_pos > n) {
                report(id, "leaf position out of range");
                continue;
            }
            if (node.length != n - node.leaf_pos + 2)
                report(id, "leaf length " + std::to_string(node.length) + " != suffix length + terminator");
            if (!node.terminated)
                report(id, "leaf edge lacks terminator");
        } else {
            if (node.terminated)
                report(id, "internal edge carries terminator");
            if (id != SparseSuffixTree::root && children < 2)
                report(id, children == 0 ? "childless internal node" : "unary internal node");
        }

        if (id != SparseSuffixTree::root) {
            if (node.parent == no_node || node.parent >= tree.nodes.size()) {
                report(id, "missing parent");
                continue;
            }
            const SstNode& parent = tree[node.parent];
            if (node.length <= parent.length)
                report(id, "length not greater than parent length");
            else if (node.edge_length() != node.length - parent.length)
                report(id, "edge label length does not match depth difference");
            if (node.edge_start <= node.edge_end && (node.edge_start < 1 || node.edge_end > n))
                report(id, "edge reference outside the text");
        }

        EdgeSymbol previous = std::numeric_limits<EdgeSymbol>::min();
        bool first = true;
        for (NodeId c = node.first_child; c != no_node; c = tree[c].next_sibling) {
            if (tree[c].parent != id)
                report(c, "parent link does not match child list");
            const EdgeSymbol s = edge_first_symbol(text, tree[c]);
            if (!first && s <= previous)
                report(id, s == previous ? "children share a first symbol" : "children unordered");
            previous = s;
            first = false;
        }
    }

    // path labels: each edge on the way to leaf q must spell the matching
    // segment of T_q followed by the terminator
    auto valid_link = [&](NodeId v) { return v != no_node && v < tree.nodes.size(); };
    for (NodeId id : reached) {
        const SstNode& leaf = tree[id];
        if (!leaf.is_leaf() || !valid_link(leaf.parent) || leaf.leaf_pos < 1 || leaf.leaf_pos > n)
            continue;
        const Pos q = leaf.leaf_pos;
        const Pos parent_len = tree[leaf.parent].length;
        if (leaf.edge_start != q + parent_len || leaf.edge_end != n)
            report(id, "leaf edge does not spell the end of its suffix");
        std::size_t steps = 0;
        for (NodeId v = leaf.parent; v != SparseSuffixTree::root; v = tree[v].parent) {
            const SstNode& node = tree[v];
            if (!valid_link(node.parent) || ++steps > tree.nodes.size()) {
                report(v, "broken parent chain");
                break;
            }
            const Pos from = q + tree[node.parent].length;
            const Pos to = q + node.length - 1;
            const bool in_text = node.edge_start >= 1 && node.edge_end <= n && to <= n;
            if (!in_text || text.substr(node.edge_start, node.edge_end) != text.substr(from, to)) {
                report(v, "edge label differs from suffix " + std::to_string(q));
                break;
            }
        }
    }

    if (leaves != ssa.sa.size())
        issues.push_back("tree has " + std::to_string(leaves) + " leaves, expected " + std::to_string(ssa.sa.size()));

    const SparseSuffixArray walked = collect_leaves(tree);
    if (!std::equal(walked.sa.begin(), walked.sa.end(), ssa.sa.begin(), ssa.sa.end()))
        issues.emplace_back("DFS leaf order differs from the suffix array");
    else if (!std::equal(walked.adj_lcp.begin(), walked.adj_lcp.end(), ssa.adj_lcp.begin(), ssa.adj_lcp.end()))
        issues.emplace_back("LCA depths of consecutive leaves differ from adjacent LCPs");
    return issues;
}

/// Canonical rendering of the labelled tree shape: edge labels as hex bytes
/// ('$' for the terminator) and leaves as their positions. Two trees over the
/// same text are equal as labelled trees iff their signatures are equal.
inline std::string shape_signature(const SparseSuffixTree& tree, const Text& text)
{
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    walk_tree(
        tree,
        [&](NodeId id) {
            const SstNode& node = tree[id];
            if (id != SparseSuffixTree::root) {
                out += '[';
                for (char c : text.substr(node.edge_start, node.edge_end)) {
                    const auto byte = static_cast<std::uint8_t>(c);
                    out += hex[byte >> 4];
                    out += hex[byte & 15];
                }
                if (node.terminated)
                    out += '$';
                out += ']';
            }
            if (node.is_leaf())
                out += std::to_string(node.leaf_pos);
            out += '(';
        },
        [&](NodeId) { out += ')'; });
    return out;
}

} // namespace sst
