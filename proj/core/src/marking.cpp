#include "pdmark/marking.hpp"

#include <algorithm>
#include <map>
#include <random>

#include <json.hpp>

namespace pdmark {

using nlohmann::json;

namespace {

std::string edge_text(const Config& from, const Letter& label, const Config& to) {
    return to_text(from) + " --" + label.name + "--> " + to_text(to);
}

} // namespace

MarkingVerdict check_well_formed(const Pda& pda, const MarkedFragment& candidate) {
    RankProvider ranks(pda);
    return check_well_formed(pda, candidate, ranks);
}

MarkingVerdict check_well_formed(const Pda& pda, const MarkedFragment& candidate,
                                 RankProvider& ranks) {
    MarkingVerdict verdict;
    auto flag = [&verdict](int condition, const std::string& subject, const std::string& detail) {
        verdict.violations.push_back(MarkingViolation{condition, subject, detail});
    };

    // candidate out-edges grouped by source
    std::map<Config, std::vector<const MarkedEdge*>> out;
    for (const auto& e : candidate.edges) out[e.from].push_back(&e);

    for (const auto& v : candidate.vertices) {
        if (candidate.is_frontier(v)) {
            verdict.skipped_frontier.push_back(v);
            continue;
        }
        const Rank rank_v = ranks(v);
        auto truth = successors(pda, v);
        auto edges_it = out.find(v);
        static const std::vector<const MarkedEdge*> none;
        const auto& cand = edges_it == out.end() ? none : edges_it->second;

        // presence + markedness of every real edge
        for (const auto& [a, w] : truth) {
            bool decreasing = ranks(w) < rank_v;
            int found = 0;
            bool marked = false;
            for (const MarkedEdge* e : cand) {
                if (e->label == a && e->to == w) {
                    ++found;
                    marked = e->marked;
                }
            }
            if (found == 0) {
                flag(decreasing ? 1 : 2, to_text(v),
                     "edge " + edge_text(v, a, w) + " missing from candidate");
            } else if (found > 1) {
                flag(3, to_text(v), "edge " + edge_text(v, a, w) + " listed more than once");
            } else if (marked && !decreasing) {
                flag(4, to_text(v),
                     "marked edge " + edge_text(v, a, w) + " does not decrease the rank");
            }
        }
        // no foreign edges
        for (const MarkedEdge* e : cand) {
            bool real = false;
            for (const auto& [a, w] : truth) {
                if (e->label == a && e->to == w) {
                    real = true;
                    break;
                }
            }
            if (!real)
                flag(3, to_text(v), "edge " + edge_text(e->from, e->label, e->to) +
                                        " is not an edge of the configuration graph");
        }
        // a configuration of finite positive rank keeps a marked way down
        if (rank_v.is_finite() && rank_v.value() > 0) {
            bool any_marked = false;
            for (const MarkedEdge* e : cand) {
                if (e->marked) {
                    any_marked = true;
                    break;
                }
            }
            if (!any_marked) flag(5, to_text(v), "no marked out-edge at a vertex of finite positive rank");
        }
    }

    std::sort(verdict.violations.begin(), verdict.violations.end());
    std::sort(verdict.skipped_frontier.begin(), verdict.skipped_frontier.end());
    verdict.ok = verdict.violations.empty();
    return verdict;
}

MarkedFragment sample_well_formed(const Pda& pda, const Fragment& fragment, std::uint64_t seed) {
    RankProvider ranks(pda);
    return sample_well_formed(pda, fragment, seed, ranks);
}

MarkedFragment sample_well_formed(const Pda&, const Fragment& fragment, std::uint64_t seed,
                                  RankProvider& ranks) {
    MarkedFragment out;
    out.vertices = fragment.vertices;
    out.frontier = fragment.frontier;
    out.roots = fragment.roots;
    out.bounds = fragment.bounds;
    out.pda_name = fragment.pda_name;

    std::mt19937_64 rng(seed);
    std::vector<char> decreasing(fragment.edges.size(), 0);
    for (std::size_t i = 0; i < fragment.edges.size(); ++i) {
        const Edge& e = fragment.edges[i];
        decreasing[i] = ranks(e.to) < ranks(e.from);
        bool marked = decreasing[i] && (rng() & 1u);
        out.edges.push_back(MarkedEdge{e.from, e.label, e.to, marked});
    }

    // fix-up: promote the least rank-decreasing out-edge where condition 5
    // would otherwise fail
    std::map<Config, std::vector<std::size_t>> out_by_vertex;
    for (std::size_t i = 0; i < out.edges.size(); ++i)
        out_by_vertex[out.edges[i].from].push_back(i);
    for (const auto& v : fragment.vertices) {
        if (fragment.is_frontier(v)) continue;
        Rank r = ranks(v);
        if (r.is_infinite() || r.value() == 0) continue;
        auto it = out_by_vertex.find(v);
        if (it == out_by_vertex.end()) continue;
        bool any = false;
        for (std::size_t i : it->second) {
            if (out.edges[i].marked) {
                any = true;
                break;
            }
        }
        if (any) continue;
        for (std::size_t i : it->second) {
            if (decreasing[i]) {
                out.edges[i].marked = true;
                break;
            }
        }
    }
    return out;
}

std::string encode_verdict(const MarkingVerdict& verdict) {
    json j;
    j["ok"] = verdict.ok;
    json violations = json::array();
    for (const auto& v : verdict.violations) {
        violations.push_back(json{{"condition", v.condition},
                                  {"subject", v.subject},
                                  {"detail", v.detail}});
    }
    j["violations"] = violations;
    json skipped = json::array();
    for (const auto& c : verdict.skipped_frontier) skipped.push_back(to_text(c));
    j["skipped_frontier"] = skipped;
    return j.dump(2) + "\n";
}

} // namespace pdmark
