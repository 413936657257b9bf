#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gvg/engine.hpp"
#include "gvg/games.hpp"

namespace gvg::test {

/// Independent reading of the request schema: true when `line` is a request
/// the server must accept. `live` is the action space of the running episode, if any.
inline bool well_formed(const std::string& line, const Corpus& corpus, const ActionSpace* live) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return false;
    auto t = j.find("type");
    if (t == j.end() || !t->is_string()) return false;
    const std::string type = *t;
    if (type == "hello" || type == "goodbye") return true;
    if (type == "abort") return live != nullptr;
    if (type == "step") {
        if (!live) return false;
        auto a = j.find("action");
        if (a == j.end()) return false;
        if (a->is_string()) {
            auto act = parse_action(a->get<std::string>());
            return act && live->contains(*act);
        }
        if (a->is_number_integer()) {
            auto i = a->get<std::int64_t>();
            return i >= 0 && i < live->size;
        }
        return false;
    }
    if (type == "reset") {
        auto g = j.find("game");
        if (g == j.end() || !g->is_string() || !corpus.contains(g->get<std::string>())) return false;
        std::int64_t level = 0;
        if (auto l = j.find("level"); l != j.end()) {
            if (!l->is_number_integer()) return false;
            level = l->get<std::int64_t>();
        }
        if (level < 0 || static_cast<std::size_t>(level) >= corpus.get(g->get<std::string>()).levels.size()) return false;
        if (auto s = j.find("seed"); s != j.end()) {
            if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0)) return false;
        }
        if (auto o = j.find("obs_mode"); o != j.end()) {
            if (!o->is_string()) return false;
            const std::string m = *o;
            if (m != "grid" && m != "pixels" && m != "both") return false;
        }
        return true;
    }
    return false;
}

/// Random request lines: raw bytes, printable noise, truncated and mutated
/// valid requests, and well-typed JSON with wrong shapes or values.
class FuzzLines {
public:
    explicit FuzzLines(std::uint64_t seed) : rng_(seed) {}

    std::string next() {
        switch (rng_.uniform(6)) {
            case 0: return bytes(false);
            case 1: return bytes(true);
            case 2: {
                std::string v = valid();
                return v.substr(0, rng_.uniform(static_cast<std::uint32_t>(v.size())));
            }
            case 3: {
                std::string v = valid();
                int n = 1 + static_cast<int>(rng_.uniform(3));
                for (int i = 0; i < n; ++i) {
                    auto at = rng_.uniform(static_cast<std::uint32_t>(v.size()));
                    v[at] = byte(false);
                }
                return v;
            }
            case 4: return shaped();
            default: {
                // valid prefix followed by junk
                return valid() + bytes(rng_.uniform(2) == 0);
            }
        }
    }

private:
    char byte(bool printable) {
        if (printable) return static_cast<char>(32 + rng_.uniform(95));
        char c;
        do {
            c = static_cast<char>(rng_.uniform(256));
        } while (c == '\n');
        return c;
    }

    std::string bytes(bool printable) {
        std::string s(rng_.uniform(120), ' ');
        for (auto& c : s) c = byte(printable);
        return s;
    }

    nlohmann::json junk_value() {
        switch (rng_.uniform(8)) {
            case 0: return nullptr;
            case 1: return rng_.uniform(2) == 1;
            case 2: return static_cast<std::int64_t>(rng_.next()) >> rng_.uniform(64);
            case 3: return rng_.unit() * 1e6 - 5e5;
            case 4: return bytes(true);
            case 5: return nlohmann::json::array({1, "x"});
            case 6: return nlohmann::json::object({{"k", 1}});
            default: return pick({"UP", "DOWN", "LEFT", "RIGHT", "USE", "NIL", "aliens", "frogs", "grid", "JUMP", ""});
        }
    }

    std::string pick(std::initializer_list<const char*> xs) {
        auto i = rng_.uniform(static_cast<std::uint32_t>(xs.size()));
        return *(xs.begin() + i);
    }

    std::string valid() {
        switch (rng_.uniform(5)) {
            case 0: return R"({"type":"hello"})";
            case 1: return R"({"type":"reset","game":"aliens","level":1,"seed":5,"obs_mode":"grid"})";
            case 2: return R"({"type":"step","action":"NIL"})";
            case 3: return R"({"type":"step","action":2})";
            default: return R"({"type":"abort"})";
        }
    }

    std::string shaped() {
        nlohmann::json j;
        switch (rng_.uniform(6)) {
            case 0: j = junk_value(); break;
            case 1: j = {{"kind", "hello"}}; break;
            case 2: j = {{"type", junk_value()}}; break;
            case 3: j = {{"type", "reset"}, {pick({"game", "level", "seed", "obs_mode"}), junk_value()}};
                if (rng_.uniform(2)) j["game"] = junk_value();
                break;
            case 4: j = {{"type", "step"}, {"action", junk_value()}}; break;
            default: j = {{"type", pick({"Hello", "RESET", "stop", "observe", "close", ""})}}; break;
        }
        return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    }

    Rng rng_;
};

}  // namespace gvg::test
