// Developer harness: plays one agent on one game and prints per-episode results.
// usage: gvgsim GAME AGENT EPISODES [BUDGET] [LEVEL] [SEED]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "gvg/agents.hpp"
#include "gvg/games.hpp"

int main(int argc, char** argv) {
    if (argc < 4) {
        std::fprintf(stderr, "usage: gvgsim GAME AGENT EPISODES [BUDGET] [LEVEL] [SEED]\n");
        return 1;
    }
    auto game = gvg::load_game(argv[1]);
    auto kind = gvg::parse_agent_kind(argv[2]);
    if (!kind) {
        std::fprintf(stderr, "unknown agent\n");
        return 1;
    }
    int episodes = std::atoi(argv[3]);
    int budget = argc > 4 ? std::atoi(argv[4]) : -1;
    std::size_t level = argc > 5 ? static_cast<std::size_t>(std::atoi(argv[5])) : 0;
    std::uint64_t seed = argc > 6 ? std::strtoull(argv[6], nullptr, 10) : 1;

    double total = 0;
    int wins = 0;
    long long ticks = 0;
    auto t0 = std::chrono::steady_clock::now();
    for (int e = 0; e < episodes; ++e) {
        gvg::AgentConfig cfg;
        cfg.kind = *kind;
        cfg.seed = seed * 7919 + static_cast<std::uint64_t>(e);
        cfg.budget.rollouts = budget;
        auto agent = gvg::make_agent(cfg);
        auto s = game.start(level, seed + static_cast<std::uint64_t>(e));
        while (s.status == gvg::Status::Running) gvg::advance(s, agent->act(s));
        std::printf("ep %d score %lld status %d ticks %lld\n", e, static_cast<long long>(s.score), static_cast<int>(s.status),
                    static_cast<long long>(s.tick));
        std::fflush(stdout);
        total += static_cast<double>(s.score);
        wins += s.status == gvg::Status::Win;
        ticks += s.tick;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("mean %.2f win %.2f ticks %.1f time %.2fs (%.0f ticks/s)\n", total / episodes,
                static_cast<double>(wins) / episodes, static_cast<double>(ticks) / episodes, secs,
                static_cast<double>(ticks) / secs);
    return 0;
}
