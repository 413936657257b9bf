#include "gvg/games.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace gvg {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<GameManifest> parse_manifest(std::string_view text) {
    std::vector<GameManifest> out;
    std::set<std::string> seen;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++number;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        SourceLoc loc{number, 1};
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) throw Error(ErrorKind::SyntaxError, "bad manifest header", loc);
            std::string id(trim(line.substr(1, line.size() - 2)));
            if (!seen.insert(id).second) throw Error(ErrorKind::SyntaxError, "duplicate manifest id '" + id + "'", loc);
            out.push_back({});
            out.back().id = id;
        } else {
            auto eq = line.find('=');
            if (eq == std::string_view::npos) throw Error(ErrorKind::SyntaxError, "expected key = value", loc);
            if (out.empty()) throw Error(ErrorKind::SyntaxError, "entry before the first [id] header", loc);
            std::string key(trim(line.substr(0, eq)));
            std::string value(trim(line.substr(eq + 1)));
            auto& m = out.back();
            if (key == "description") {
                m.description_path = value;
            } else if (key == "levels") {
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    auto t = trim(item);
                    if (!t.empty()) m.level_paths.emplace_back(t);
                }
            } else if (key == "actions") {
                m.actions = value;
            } else if (key == "reward") {
                m.reward = value;
            } else if (key == "stochastic") {
                if (value != "true" && value != "false") throw Error(ErrorKind::InvalidValue, "stochastic must be true or false", loc);
                m.stochastic = value == "true";
            } else {
                throw Error(ErrorKind::UnknownParameter, "unknown manifest key '" + key + "'", loc);
            }
        }
        if (end == text.size()) break;
    }
    for (const auto& m : out) {
        if (m.description_path.empty()) throw Error(ErrorKind::InvalidValue, "game '" + m.id + "' has no description");
        if (m.level_paths.empty()) throw Error(ErrorKind::InvalidValue, "game '" + m.id + "' has no levels");
    }
    return out;
}

std::filesystem::path default_games_dir() {
    if (const char* env = std::getenv("GVG_GAMES"); env && *env) return env;
#ifdef GVG_GAMES_DIR
    return GVG_GAMES_DIR;
#else
    return "games";
#endif
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GameState LoadedGame::start(std::size_t level, std::uint64_t seed) const {
    if (level >= levels.size()) {
        throw Error(ErrorKind::BadLevel, "game '" + manifest.id + "' has " + std::to_string(levels.size()) +
                                             " levels, requested " + std::to_string(level));
    }
    return init_state(compiled, levels[level], seed);
}

namespace {

LoadedGame load_entry(const GameManifest& m, const std::filesystem::path& dir) {
    LoadedGame g;
    g.manifest = m;
    g.desc = parse_game(read_text_file(dir / m.description_path));
    g.compiled = compile(g.desc);
    for (const auto& p : m.level_paths) {
        g.levels.push_back(parse_level(read_text_file(dir / p), g.desc));
        init_state(g.compiled, g.levels.back(), 0);  // surfaces IncompatibleLevel now
    }
    return g;
}

std::vector<GameManifest> read_manifest(const std::filesystem::path& dir) {
    return parse_manifest(read_text_file(dir / "manifest.txt"));
}

}  // namespace

LoadedGame load_game(std::string_view id, const std::filesystem::path& dir) {
    for (const auto& m : read_manifest(dir)) {
        if (m.id == id) return load_entry(m, dir);
    }
    throw Error(ErrorKind::UnknownGame, "unknown game '" + std::string(id) + "'");
}

Corpus Corpus::load(const std::filesystem::path& dir) {
    Corpus c;
    for (const auto& m : read_manifest(dir)) {
        c.ids_.push_back(m.id);
        c.games_.emplace(m.id, std::make_shared<const LoadedGame>(load_entry(m, dir)));
    }
    return c;
}

bool Corpus::contains(std::string_view id) const { return games_.find(id) != games_.end(); }

const LoadedGame& Corpus::get(std::string_view id) const {
    auto it = games_.find(id);
    if (it == games_.end()) throw Error(ErrorKind::UnknownGame, "unknown game '" + std::string(id) + "'");
    return *it->second;
}

int ValidationReport::passed() const {
    return static_cast<int>(std::count_if(games.begin(), games.end(), [](const GameValidation& g) { return g.ok; }));
}

ValidationReport validate_corpus(const std::filesystem::path& dir, int episodes, std::uint64_t seed) {
    ValidationReport report;
    std::vector<GameManifest> manifest;
    try {
        manifest = read_manifest(dir);
    } catch (const Error& e) {
        report.games.push_back({"manifest", false, e.what()});
        return report;
    }
    for (const auto& m : manifest) {
        GameValidation v;
        v.id = m.id;
        try {
            LoadedGame g = load_entry(m, dir);
            Rng pick(seed ^ fnv1a64(m.id));
            std::int64_t lo = std::numeric_limits<std::int64_t>::max();
            std::int64_t hi = std::numeric_limits<std::int64_t>::min();
            double total = 0;
            double ticks = 0;
            for (int e = 0; e < episodes; ++e) {
                GameState s = g.start(0, seed + static_cast<std::uint64_t>(e));
                while (s.status == Status::Running) {
                    auto acts = s.actions.view();
                    advance(s, acts[pick.uniform(static_cast<std::uint32_t>(acts.size()))]);
                }
                lo = std::min(lo, s.score);
                hi = std::max(hi, s.score);
                total += static_cast<double>(s.score);
                ticks += static_cast<double>(s.tick);
                v.wins += s.status == Status::Win;
                ++v.episodes;
            }
            v.ok = true;
            if (episodes > 0) {
                v.min_score = lo;
                v.max_score = hi;
                v.mean_score = total / episodes;
                v.mean_ticks = ticks / episodes;
            }
        } catch (const Error& e) {
            v.ok = false;
            v.error = e.what();
        }
        report.games.push_back(std::move(v));
    }
    return report;
}

}  // namespace gvg
