#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gvg/engine.hpp"

namespace gvg {

enum class AgentKind { Random, GA, MCTS, IW };

std::string_view to_string(AgentKind k);
std::optional<AgentKind> parse_agent_kind(std::string_view name);

/// Per-move planning budget. In rollout mode the unit depends on the agent:
/// simulations for MCTS, genome evaluations for GA, generated nodes for IW.
struct PlanBudget {
    enum class Mode { Rollouts, WallClock };
    Mode mode = Mode::Rollouts;
    int rollouts = -1;  // negative means the agent's default
    int millis = 40;
};

struct MctsParams {
    double exploration = std::sqrt(2.0);
    int depth = 10;  // total simulated ticks from the root
};

struct GaParams {
    int population = 24;
    int genome_length = 14;
    double mutation_rate = 0;  // 0 means 1 / genome_length
    int elites = 1;
    double win_bonus = 1e6;
    double loss_penalty = 1e6;
};

struct IwParams {
    std::int64_t score_bucket = 1;
};

struct AgentConfig {
    AgentKind kind = AgentKind::Random;
    std::uint64_t seed = 0;
    PlanBudget budget;
    MctsParams mcts;
    GaParams ga;
    IwParams iw;
};

int default_rollouts(AgentKind kind);

class Agent {
public:
    virtual ~Agent() = default;
    /// Chooses an action for `state` without modifying it.
    virtual Action act(const GameState& state) = 0;
    /// Drops anything carried between moves (call at episode start).
    virtual void reset() {}
};

std::unique_ptr<Agent> make_agent(const AgentConfig& config);

class RandomAgent : public Agent {
public:
    explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
    Action act(const GameState& state) override;

private:
    Rng rng_;
};

class MctsAgent : public Agent {
public:
    MctsAgent(std::uint64_t seed, PlanBudget budget, MctsParams params);
    Action act(const GameState& state) override;

    struct Stats {
        int simulations = 0;
        std::vector<int> root_visits;  // per action-space index
    };
    const Stats& last_stats() const { return stats_; }

private:
    Rng rng_;
    PlanBudget budget_;
    MctsParams params_;
    Stats stats_;
};

class GaAgent : public Agent {
public:
    GaAgent(std::uint64_t seed, PlanBudget budget, GaParams params);
    Action act(const GameState& state) override;
    void reset() override { carried_.clear(); }

    struct Stats {
        int evaluations = 0;
        int generations = 0;
        double best_fitness = 0;
        std::vector<Action> best_genome;
    };
    const Stats& last_stats() const { return stats_; }

private:
    double evaluate(const GameState& root, const std::vector<Action>& genome) const;

    Rng rng_;
    PlanBudget budget_;
    GaParams params_;
    std::vector<Action> carried_;
    Stats stats_;
};

class IwAgent : public Agent {
public:
    IwAgent(std::uint64_t seed, PlanBudget budget, IwParams params);
    Action act(const GameState& state) override;

    struct Stats {
        int generated = 0;
        int novel = 0;
        int expanded = 0;
        int best_depth = 0;
        std::int64_t best_score = 0;
    };
    const Stats& last_stats() const { return stats_; }

private:
    Rng rng_;
    PlanBudget budget_;
    IwParams params_;
    Stats stats_;
};

}  // namespace gvg
