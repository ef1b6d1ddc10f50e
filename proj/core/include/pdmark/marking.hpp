#ifndef PDMARK_MARKING_HPP
#define PDMARK_MARKING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pdmark/fragment.hpp"
#include "pdmark/rank.hpp"

namespace pdmark {

/// One well-formedness violation. Condition indices:
///   1 - a rank-decreasing edge of the graph is missing from the candidate
///   2 - a rank-nondecreasing edge is missing (it must be present, plain)
///   3 - a candidate edge that is not an edge of the graph, or a duplicate
///   4 - a marked candidate edge that does not decrease the rank
///   5 - a vertex of finite positive rank with no marked out-edge
struct MarkingViolation {
    int condition = 0;
    std::string subject;
    std::string detail;

    auto operator<=>(const MarkingViolation&) const = default;
};

struct MarkingVerdict {
    bool ok = true;
    std::vector<MarkingViolation> violations;
    std::vector<Config> skipped_frontier;
};

/// Judges every non-frontier vertex of the candidate against the five
/// well-formedness conditions; frontier vertices have incomplete
/// out-neighborhoods in a fragment and are recorded as skipped instead.
/// Ranks are global (computed on the full graph, not the fragment).
MarkingVerdict check_well_formed(const Pda& pda, const MarkedFragment& candidate);
MarkingVerdict check_well_formed(const Pda& pda, const MarkedFragment& candidate,
                                 RankProvider& ranks);

/// Draws a random well-formed marking: every canonical rank-decreasing edge
/// is kept marked with probability 1/2 (mt19937_64 seeded with `seed`, bits
/// consumed in canonical edge order), then any non-frontier vertex of finite
/// positive rank left without a marked out-edge gets its lexicographically
/// least rank-decreasing out-edge promoted. Identical inputs and seed give
/// identical output.
MarkedFragment sample_well_formed(const Pda& pda, const Fragment& fragment, std::uint64_t seed);
MarkedFragment sample_well_formed(const Pda& pda, const Fragment& fragment, std::uint64_t seed,
                                  RankProvider& ranks);

std::string encode_verdict(const MarkingVerdict& verdict);

} // namespace pdmark

#endif
