#include "pdmark/fragment.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pdmark {

using nlohmann::json;

template <typename EdgeT>
bool BasicFragment<EdgeT>::has_vertex(const Config& c) const {
    return std::binary_search(vertices.begin(), vertices.end(), c);
}

template <typename EdgeT>
bool BasicFragment<EdgeT>::is_frontier(const Config& c) const {
    return std::binary_search(frontier.begin(), frontier.end(), c);
}

template struct BasicFragment<Edge>;
template struct BasicFragment<MarkedEdge>;

Fragment underlying(const MarkedFragment& marked) {
    Fragment f;
    f.vertices = marked.vertices;
    f.frontier = marked.frontier;
    f.roots = marked.roots;
    f.bounds = marked.bounds;
    f.pda_name = marked.pda_name;
    for (const auto& e : marked.edges) f.edges.push_back(Edge{e.from, e.label, e.to});
    std::sort(f.edges.begin(), f.edges.end());
    return f;
}

Fragment explore(const Pda& pda, const std::vector<Config>& roots, const Bounds& bounds) {
    for (const auto& r : roots) {
        require_config(pda, r);
        if (r.stack.height() > bounds.max_stack_height)
            throw InputError("root " + to_text(r) + " exceeds max_stack_height");
    }

    std::map<Config, std::size_t> depth;
    std::deque<Config> queue;
    for (const auto& r : roots) {
        if (depth.emplace(r, 0).second) queue.push_back(r);
    }

    std::set<Config> frontier;
    std::vector<Edge> edges;
    while (!queue.empty()) {
        Config v = queue.front();
        queue.pop_front();
        std::size_t d = depth.at(v);
        if (d == bounds.depth) {
            frontier.insert(v);
            continue;
        }
        auto succs = successors(pda, v);
        bool overheight = false;
        for (const auto& [a, w] : succs) {
            if (w.stack.height() > bounds.max_stack_height) {
                overheight = true;
                break;
            }
        }
        if (overheight) {
            frontier.insert(v);
            continue;
        }
        for (const auto& [a, w] : succs) {
            if (!w.stack.well_formed())
                throw InputError("reached malformed configuration " + to_text(w));
            edges.push_back(Edge{v, a, w});
            if (depth.emplace(w, d + 1).second) queue.push_back(w);
        }
    }

    Fragment f;
    f.roots = roots;
    std::sort(f.roots.begin(), f.roots.end());
    f.roots.erase(std::unique(f.roots.begin(), f.roots.end()), f.roots.end());
    f.bounds = bounds;
    for (const auto& [c, d] : depth) f.vertices.push_back(c);
    f.frontier.assign(frontier.begin(), frontier.end());
    std::sort(edges.begin(), edges.end());
    f.edges = std::move(edges);
    return f;
}

const MarkedEdge* find_edge(const MarkedFragment& fragment, const Config& from,
                            const Letter& label) {
    MarkedEdge probe{from, label, Config{}, false};
    auto it = std::lower_bound(fragment.edges.begin(), fragment.edges.end(), probe,
                               [](const MarkedEdge& a, const MarkedEdge& b) {
                                   return std::tie(a.from, a.label) < std::tie(b.from, b.label);
                               });
    if (it == fragment.edges.end() || it->from != from || it->label != label) return nullptr;
    return &*it;
}

namespace {

json config_array(const std::vector<Config>& configs) {
    json out = json::array();
    for (const auto& c : configs) out.push_back(to_text(c));
    return out;
}

template <typename EdgeT>
json fragment_json(const BasicFragment<EdgeT>& f, bool with_marks) {
    json j;
    j["schema_version"] = kFragmentSchemaVersion;
    if (f.pda_name) j["pda_name"] = *f.pda_name;
    j["roots"] = config_array(f.roots);
    j["bounds"] = json{{"depth", f.bounds.depth}, {"max_stack_height", f.bounds.max_stack_height}};
    j["vertices"] = config_array(f.vertices);
    j["frontier"] = config_array(f.frontier);
    json edges = json::array();
    for (const auto& e : f.edges) {
        json je;
        je["from"] = to_text(e.from);
        je["label"] = e.label.name;
        je["to"] = to_text(e.to);
        if (with_marks) {
            if constexpr (std::is_same_v<EdgeT, MarkedEdge>) je["marked"] = e.marked;
        }
        edges.push_back(je);
    }
    j["edges"] = edges;
    return j;
}

} // namespace

std::string encode_fragment(const Fragment& fragment) {
    return fragment_json(fragment, false).dump(2) + "\n";
}

std::string encode_fragment(const MarkedFragment& fragment) {
    return fragment_json(fragment, true).dump(2) + "\n";
}

namespace {

Config parse_config_at(const std::string& text, const std::string& path) {
    try {
        return parse_config(text);
    } catch (const ParseError& e) {
        throw ParseError(path, e.what());
    }
}

std::vector<Config> config_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    std::vector<Config> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_string()) throw ParseError(p, "expected a config string");
        out.push_back(parse_config_at(j[i].get<std::string>(), p));
    }
    return out;
}

} // namespace

std::variant<Fragment, MarkedFragment> decode_fragment(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("fragment", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("fragment", "expected an object");

    static const std::set<std::string> known = {"schema_version", "pda_name", "roots",
                                                "bounds",         "vertices", "frontier",
                                                "edges"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw ParseError(it.key(), "unknown field");
    }
    if (j.contains("schema_version")) {
        if (!j["schema_version"].is_number_integer() ||
            j["schema_version"].get<int>() != kFragmentSchemaVersion)
            throw ParseError("schema_version", "unsupported schema version");
    }

    MarkedFragment m; // decoded into the marked shape, downgraded at the end
    if (j.contains("pda_name")) {
        if (!j["pda_name"].is_string()) throw ParseError("pda_name", "expected a string");
        m.pda_name = j["pda_name"].get<std::string>();
    }
    if (!j.contains("roots")) throw ParseError("roots", "missing field");
    m.roots = config_list(j["roots"], "roots");
    if (!j.contains("bounds") || !j["bounds"].is_object())
        throw ParseError("bounds", "missing or not an object");
    const json& b = j["bounds"];
    if (!b.contains("depth") || !b["depth"].is_number_unsigned())
        throw ParseError("bounds.depth", "expected a non-negative integer");
    if (!b.contains("max_stack_height") || !b["max_stack_height"].is_number_unsigned())
        throw ParseError("bounds.max_stack_height", "expected a non-negative integer");
    m.bounds.depth = b["depth"].get<std::size_t>();
    m.bounds.max_stack_height = b["max_stack_height"].get<std::size_t>();
    if (!j.contains("vertices")) throw ParseError("vertices", "missing field");
    m.vertices = config_list(j["vertices"], "vertices");
    std::sort(m.vertices.begin(), m.vertices.end());
    if (std::adjacent_find(m.vertices.begin(), m.vertices.end()) != m.vertices.end())
        throw ParseError("vertices", "duplicate vertex");
    if (!j.contains("frontier")) throw ParseError("frontier", "missing field");
    m.frontier = config_list(j["frontier"], "frontier");
    std::sort(m.frontier.begin(), m.frontier.end());
    std::sort(m.roots.begin(), m.roots.end());

    auto require_vertex = [&m](const Config& c, const std::string& path) {
        if (!m.has_vertex(c)) throw ParseError(path, "undeclared vertex '" + to_text(c) + "'");
    };
    for (std::size_t i = 0; i < m.frontier.size(); ++i)
        require_vertex(m.frontier[i], "frontier[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < m.roots.size(); ++i)
        require_vertex(m.roots[i], "roots[" + std::to_string(i) + "]");

    if (!j.contains("edges") || !j["edges"].is_array())
        throw ParseError("edges", "missing or not an array");
    const json& edges = j["edges"];
    std::size_t marked_count = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string p = "edges[" + std::to_string(i) + "]";
        const json& je = edges[i];
        if (!je.is_object()) throw ParseError(p, "expected an object");
        MarkedEdge e;
        if (!je.contains("from") || !je["from"].is_string())
            throw ParseError(p + ".from", "expected a config string");
        e.from = parse_config_at(je["from"].get<std::string>(), p + ".from");
        if (!je.contains("label") || !je["label"].is_string())
            throw ParseError(p + ".label", "expected a string");
        e.label = Letter{je["label"].get<std::string>()};
        if (!je.contains("to") || !je["to"].is_string())
            throw ParseError(p + ".to", "expected a config string");
        e.to = parse_config_at(je["to"].get<std::string>(), p + ".to");
        if (je.contains("marked")) {
            if (!je["marked"].is_boolean()) throw ParseError(p + ".marked", "expected a boolean");
            e.marked = je["marked"].get<bool>();
            ++marked_count;
        }
        require_vertex(e.from, p + ".from");
        require_vertex(e.to, p + ".to");
        m.edges.push_back(std::move(e));
    }
    if (marked_count != 0 && marked_count != edges.size())
        throw ParseError("edges", "mixed marked and unmarked edge entries");
    std::sort(m.edges.begin(), m.edges.end());

    if (marked_count == 0) return underlying(m);
    return m;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

template <typename EdgeT>
std::string dot_impl(const BasicFragment<EdgeT>& f) {
    std::ostringstream os;
    os << "digraph fragment {\n";
    for (const auto& v : f.vertices) {
        os << "  \"" << dot_escape(to_text(v)) << "\";\n";
    }
    for (const auto& e : f.edges) {
        bool marked = false;
        if constexpr (std::is_same_v<EdgeT, MarkedEdge>) marked = e.marked;
        os << "  \"" << dot_escape(to_text(e.from)) << "\" -> \""
           << dot_escape(to_text(e.to)) << "\" [label=\"" << (marked ? "_" : "")
           << dot_escape(e.label.name) << "\"";
        if (marked) os << ", style=bold";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace

std::string export_dot(const Fragment& fragment) { return dot_impl(fragment); }
std::string export_dot(const MarkedFragment& fragment) { return dot_impl(fragment); }

} // namespace pdmark
