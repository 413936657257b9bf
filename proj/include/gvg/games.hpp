#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gvg/engine.hpp"
#include "gvg/vgdl.hpp"

namespace gvg {

struct GameManifest {
    std::string id;
    std::string description_path;  // relative to the corpus directory
    std::vector<std::string> level_paths;
    std::string actions;  // informational note
    std::string reward;   // informational note
    bool stochastic = false;
};

/// Flat manifest: `[id]` headers followed by `key = value` lines; `#` comments.
std::vector<GameManifest> parse_manifest(std::string_view text);

struct LoadedGame {
    GameManifest manifest;
    GameDescription desc;
    std::shared_ptr<const CompiledGame> compiled;
    std::vector<LevelGrid> levels;

    GameState start(std::size_t level, std::uint64_t seed) const;
};

/// Directory holding manifest.txt. GVG_GAMES overrides the built-in location.
std::filesystem::path default_games_dir();

std::string read_text_file(const std::filesystem::path& path);

LoadedGame load_game(std::string_view id, const std::filesystem::path& dir = default_games_dir());

/// Every game of a corpus directory, loaded eagerly. Read-only after construction.
class Corpus {
public:
    static Corpus load(const std::filesystem::path& dir = default_games_dir());

    const std::vector<std::string>& ids() const { return ids_; }
    bool contains(std::string_view id) const;
    /// Throws UnknownGame.
    const LoadedGame& get(std::string_view id) const;

private:
    std::vector<std::string> ids_;
    std::map<std::string, std::shared_ptr<const LoadedGame>, std::less<>> games_;
};

struct GameValidation {
    std::string id;
    bool ok = false;
    std::string error;
    int episodes = 0;
    int wins = 0;
    std::int64_t min_score = 0;
    std::int64_t max_score = 0;
    double mean_score = 0;
    double mean_ticks = 0;
};

struct ValidationReport {
    std::vector<GameValidation> games;
    int passed() const;
};

/// Loads every manifest entry and plays `episodes` uniformly random episodes on
/// level 0. Failures are reported per game; nothing is thrown for them.
ValidationReport validate_corpus(const std::filesystem::path& dir = default_games_dir(), int episodes = 100,
                                 std::uint64_t seed = 1);

}  // namespace gvg
