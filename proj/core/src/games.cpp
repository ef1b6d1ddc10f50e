#include "pdmark/games.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace pdmark {

using nlohmann::json;

AttractorResult attractor(const GameFragment& game) {
    const Fragment& f = game.fragment;
    for (const auto& v : f.vertices) {
        if (!game.owner.count(v.state))
            throw InputError("vertex " + to_text(v) + ": state '" + v.state + "' has no owner");
    }
    for (const auto& t : game.targets) {
        if (!f.has_vertex(t))
            throw InputError("target " + to_text(t) + " is not a fragment vertex");
    }

    std::map<Config, std::vector<const Edge*>> out;
    for (const auto& e : f.edges) out[e.from].push_back(&e);

    AttractorResult res;
    for (const auto& t : game.targets) res.levels[t] = 0;

    bool grew = true;
    std::size_t k = 0;
    while (grew) {
        grew = false;
        std::vector<std::pair<Config, std::size_t>> added;
        for (const auto& v : f.vertices) {
            if (res.levels.count(v)) continue;
            if (f.is_frontier(v)) continue; // incomplete out-neighborhood
            auto it = out.find(v);
            if (it == out.end() || it->second.empty()) continue; // dead end, loses
            const Player owner = game.owner.at(v.state);
            if (owner == Player::Eve) {
                bool some = false;
                for (const Edge* e : it->second) {
                    auto lv = res.levels.find(e->to);
                    if (lv != res.levels.end() && lv->second <= k) {
                        some = true;
                        break;
                    }
                }
                if (some) added.emplace_back(v, k + 1);
            } else {
                bool all = true;
                for (const Edge* e : it->second) {
                    auto lv = res.levels.find(e->to);
                    if (lv == res.levels.end() || lv->second > k) {
                        all = false;
                        break;
                    }
                }
                if (all) added.emplace_back(v, k + 1);
            }
        }
        for (const auto& [v, level] : added) {
            res.levels[v] = level;
            grew = true;
        }
        ++k;
    }

    for (const auto& [v, level] : res.levels) res.winning.push_back(v);
    std::sort(res.winning.begin(), res.winning.end());

    // positional strategy: minimal-level successor, lexicographic tie-break
    for (const auto& [v, level] : res.levels) {
        if (level == 0) continue;
        if (game.owner.at(v.state) != Player::Eve) continue;
        const Edge* best = nullptr;
        std::size_t best_level = 0;
        for (const Edge* e : out.at(v)) {
            auto lv = res.levels.find(e->to);
            if (lv == res.levels.end() || lv->second >= level) continue;
            if (best == nullptr || lv->second < best_level) {
                best = e;
                best_level = lv->second;
            }
        }
        if (best != nullptr) res.strategy.emplace(v, *best);
    }
    return res;
}

GameFragment decode_game(const std::string& text, const Pda& pda) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("game", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("game", "expected an object");
    if (!j.contains("owner") || !j["owner"].is_object())
        throw ParseError("owner", "missing or not an object");

    json fragment_json = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "owner" || it.key() == "targets") continue;
        fragment_json[it.key()] = it.value();
    }
    auto decoded = decode_fragment(fragment_json.dump());
    if (!std::holds_alternative<Fragment>(decoded))
        throw ParseError("edges", "game fragments carry no marks");

    GameFragment game;
    game.fragment = std::get<Fragment>(std::move(decoded));
    for (auto it = j["owner"].begin(); it != j["owner"].end(); ++it) {
        if (!it.value().is_string())
            throw ParseError("owner." + it.key(), "expected \"eve\" or \"adam\"");
        const std::string who = it.value().get<std::string>();
        if (who == "eve") game.owner[it.key()] = Player::Eve;
        else if (who == "adam") game.owner[it.key()] = Player::Adam;
        else throw ParseError("owner." + it.key(), "expected \"eve\" or \"adam\"");
    }
    if (j.contains("targets")) {
        if (!j["targets"].is_array()) throw ParseError("targets", "expected an array");
        for (std::size_t i = 0; i < j["targets"].size(); ++i) {
            if (!j["targets"][i].is_string())
                throw ParseError("targets[" + std::to_string(i) + "]", "expected a config string");
            game.targets.push_back(parse_config(j["targets"][i].get<std::string>()));
        }
    } else {
        for (const auto& v : game.fragment.vertices) {
            if (is_final_config(pda, v)) game.targets.push_back(v);
        }
    }
    std::sort(game.targets.begin(), game.targets.end());
    game.targets.erase(std::unique(game.targets.begin(), game.targets.end()), game.targets.end());
    return game;
}

std::string encode_attractor(const AttractorResult& result) {
    json j;
    json winning = json::array();
    for (const auto& c : result.winning) winning.push_back(to_text(c));
    j["winning"] = winning;
    json levels = json::object();
    for (const auto& [c, level] : result.levels) levels[to_text(c)] = level;
    j["levels"] = levels;
    json strategy = json::array();
    for (const auto& [c, e] : result.strategy) {
        strategy.push_back(
            json{{"from", to_text(e.from)}, {"label", e.label.name}, {"to", to_text(e.to)}});
    }
    j["strategy"] = strategy;
    return j.dump(2) + "\n";
}

} // namespace pdmark
