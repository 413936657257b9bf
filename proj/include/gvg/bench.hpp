#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gvg/agents.hpp"
#include "gvg/games.hpp"

namespace gvg {

inline constexpr int kBenchSchemaVersion = 1;

struct BenchSpec {
    std::vector<std::string> games;
    std::vector<AgentConfig> agents;
    int episodes = 20;
    std::uint64_t base_seed = 1;
    int level = 0;
    int threads = 1;
    std::string output;  // CSV path; empty = none
};

/// JSON config, documented in docs/bench-config.md. Throws InvalidValue.
BenchSpec parse_bench_spec(const nlohmann::json& j);
nlohmann::json to_json(const BenchSpec& spec);
/// Hash of the canonical spec (output path excluded).
std::string bench_config_hash(const BenchSpec& spec);

struct EpisodeOutcome {
    std::int64_t score = 0;
    Status status = Status::Running;
    std::int64_t ticks = 0;
};

/// Plays one episode of `agent` from `level` seeded with `seed`.
EpisodeOutcome play_episode(const LoadedGame& game, std::size_t level, Agent& agent, std::uint64_t seed,
                            std::int64_t max_ticks = -1);

struct BenchCell {
    std::string game;
    AgentKind agent = AgentKind::Random;
    int episodes = 0;  // completed
    int failures = 0;
    std::string first_error;
    double mean_score = 0;
    double std_score = 0;  // population standard deviation
    double win_rate = 0;
    double mean_ticks = 0;
    std::optional<double> ref_score;
    std::vector<EpisodeOutcome> outcomes;
};

struct BenchReport {
    BenchSpec spec;
    std::string config_hash;
    std::vector<BenchCell> cells;  // spec order: games outer, agents inner

    int failures() const;
    const BenchCell* find(std::string_view game, AgentKind agent) const;
};

/// Episode i of every cell uses environment seed base_seed + i.
BenchReport run_bench(const BenchSpec& spec, const Corpus& corpus);

std::string bench_csv(const BenchReport& r);
std::string bench_table(const BenchReport& r);

/// Reference mean scores from the published comparison table (annotation only).
std::optional<double> reference_score(std::string_view game, AgentKind agent);

}  // namespace gvg
