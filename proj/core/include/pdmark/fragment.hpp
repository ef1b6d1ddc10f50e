#ifndef PDMARK_FRAGMENT_HPP
#define PDMARK_FRAGMENT_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pdmark/pda.hpp"

namespace pdmark {

/// Exploration limits: BFS radius from the roots and the maximal number of
/// non-bottom symbols a materialized configuration may carry.
struct Bounds {
    std::size_t depth = 0;
    std::size_t max_stack_height = 0;

    auto operator<=>(const Bounds&) const = default;
};

struct Edge {
    Config from;
    Letter label;
    Config to;

    auto operator<=>(const Edge&) const = default;
};

struct MarkedEdge {
    Config from;
    Letter label;
    Config to;
    bool marked = false;

    auto operator<=>(const MarkedEdge&) const = default;
};

/// A finite portion of a configuration graph. Non-frontier vertices carry
/// their complete out-neighborhood; frontier vertices carry none, so
/// downstream checkers can skip them instead of reporting truncation as a
/// violation. Vertices, edges and frontier are kept sorted.
template <typename EdgeT>
struct BasicFragment {
    std::vector<Config> vertices;
    std::vector<EdgeT> edges;
    std::vector<Config> frontier;
    std::vector<Config> roots;
    Bounds bounds;
    std::optional<std::string> pda_name;

    bool has_vertex(const Config& c) const;
    bool is_frontier(const Config& c) const;

    auto operator<=>(const BasicFragment&) const = default;
};

using Fragment = BasicFragment<Edge>;
using MarkedFragment = BasicFragment<MarkedEdge>;

/// Forgets the marks.
Fragment underlying(const MarkedFragment& marked);

/// BFS from `roots`, honoring both bounds. A vertex is frontier iff it sits
/// at exactly `bounds.depth` or has a successor whose height exceeds
/// `bounds.max_stack_height`; frontier vertices contribute no out-edges.
Fragment explore(const Pda& pda, const std::vector<Config>& roots, const Bounds& bounds);

/// Looks up the unique out-edge of `from` labeled `label`, or nullptr.
const MarkedEdge* find_edge(const MarkedFragment& fragment, const Config& from,
                            const Letter& label);

/// Canonical JSON (sorted keys, canonically ordered arrays); byte-stable
/// across runs. Marked payloads carry a `marked` flag on every edge.
std::string encode_fragment(const Fragment& fragment);
std::string encode_fragment(const MarkedFragment& fragment);

/// Inverse of encode_fragment on its image. Schema violations raise
/// ParseError naming the path to the offending field.
std::variant<Fragment, MarkedFragment> decode_fragment(const std::string& text);

/// DOT digraph. Vertex labels use the `state:stack` textual form; marked
/// edges get style=bold and a label prefixed with '_'.
std::string export_dot(const Fragment& fragment);
std::string export_dot(const MarkedFragment& fragment);

/// Version of the fragment/marking JSON schema emitted by encode_fragment.
constexpr int kFragmentSchemaVersion = 1;

} // namespace pdmark

#endif
