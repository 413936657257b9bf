#include "gvg/bench.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

namespace gvg {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidValue, "bench config: " + what); }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        bad(std::string("field '") + key + "' has the wrong type");
    }
}

void parse_agent_fields(const json& j, AgentConfig& c);

AgentConfig parse_agent(const json& j) {
    AgentConfig c;
    if (j.is_string()) {
        auto k = parse_agent_kind(j.get<std::string>());
        if (!k) bad("unknown agent '" + j.get<std::string>() + "'");
        c.kind = *k;
    } else if (!j.is_object()) {
        bad("agent entries must be names or objects");
    } else {
        parse_agent_fields(j, c);
    }
    // Random takes no budget
    if (c.budget.rollouts < 0 && c.kind != AgentKind::Random) c.budget.rollouts = default_rollouts(c.kind);
    return c;
}

void parse_agent_fields(const json& j, AgentConfig& c) {
    auto k = parse_agent_kind(get_or<std::string>(j, "kind", ""));
    if (!k) bad("agent needs a known 'kind'");
    c.kind = *k;
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (auto b = j.find("budget"); b != j.end()) {
        auto mode = get_or<std::string>(*b, "mode", "rollouts");
        if (mode == "rollouts") {
            c.budget.mode = PlanBudget::Mode::Rollouts;
        } else if (mode == "wall-clock") {
            c.budget.mode = PlanBudget::Mode::WallClock;
        } else {
            bad("budget mode must be rollouts or wall-clock");
        }
        c.budget.rollouts = get_or<int>(*b, "rollouts", -1);
        c.budget.millis = get_or<int>(*b, "millis", 40);
        bool planner = c.kind != AgentKind::Random;
        if ((planner && c.budget.rollouts == 0) || c.budget.rollouts < -1 || c.budget.millis < 1) bad("budget values must be positive");
    }
    if (auto m = j.find("mcts"); m != j.end()) {
        c.mcts.exploration = get_or<double>(*m, "exploration", c.mcts.exploration);
        c.mcts.depth = get_or<int>(*m, "depth", c.mcts.depth);
    }
    if (auto g = j.find("ga"); g != j.end()) {
        c.ga.population = get_or<int>(*g, "population", c.ga.population);
        c.ga.genome_length = get_or<int>(*g, "genome_length", c.ga.genome_length);
        c.ga.mutation_rate = get_or<double>(*g, "mutation_rate", c.ga.mutation_rate);
        c.ga.elites = get_or<int>(*g, "elites", c.ga.elites);
        if (c.ga.population < 2 || c.ga.genome_length < 1 || c.ga.elites < 0) bad("invalid ga parameters");
    }
    if (auto w = j.find("iw"); w != j.end()) {
        c.iw.score_bucket = get_or<std::int64_t>(*w, "score_bucket", c.iw.score_bucket);
        if (c.iw.score_bucket < 1) bad("iw score_bucket must be >= 1");
    }
    if (c.mcts.depth < 1 || !(c.mcts.exploration >= 0)) bad("invalid mcts parameters");
}

json agent_json(const AgentConfig& c) {
    json b = {{"mode", c.budget.mode == PlanBudget::Mode::Rollouts ? "rollouts" : "wall-clock"},
              {"rollouts", c.budget.rollouts},
              {"millis", c.budget.millis}};
    return json{{"kind", std::string(to_string(c.kind))},
                {"seed", c.seed},
                {"budget", b},
                {"mcts", {{"exploration", c.mcts.exploration}, {"depth", c.mcts.depth}}},
                {"ga",
                 {{"population", c.ga.population},
                  {"genome_length", c.ga.genome_length},
                  {"mutation_rate", c.ga.mutation_rate},
                  {"elites", c.ga.elites}}},
                {"iw", {{"score_bucket", c.iw.score_bucket}}}};
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    Rng r(a * 0x9e3779b97f4a7c15ULL ^ b);
    return r.next();
}

}  // namespace

BenchSpec parse_bench_spec(const json& j) {
    if (!j.is_object()) bad("top level must be an object");
    BenchSpec s;
    auto g = j.find("games");
    if (g == j.end() || !g->is_array() || g->empty()) bad("'games' must be a non-empty list");
    for (const auto& x : *g) {
        if (!x.is_string()) bad("game ids must be strings");
        s.games.push_back(x.get<std::string>());
    }
    auto a = j.find("agents");
    if (a == j.end() || !a->is_array() || a->empty()) bad("'agents' must be a non-empty list");
    for (const auto& x : *a) s.agents.push_back(parse_agent(x));
    s.episodes = get_or<int>(j, "episodes", s.episodes);
    s.base_seed = get_or<std::uint64_t>(j, "base_seed", s.base_seed);
    s.level = get_or<int>(j, "level", s.level);
    s.threads = get_or<int>(j, "threads", s.threads);
    s.output = get_or<std::string>(j, "output", s.output);
    if (s.episodes < 1) bad("episodes must be >= 1");
    if (s.level < 0) bad("level must be >= 0");
    if (s.threads < 1) bad("threads must be >= 1");
    return s;
}

json to_json(const BenchSpec& spec) {
    json agents = json::array();
    for (const auto& a : spec.agents) agents.push_back(agent_json(a));
    return json{{"games", spec.games},     {"agents", agents}, {"episodes", spec.episodes}, {"base_seed", spec.base_seed},
                {"level", spec.level},     {"threads", spec.threads}, {"output", spec.output}};
}

std::string bench_config_hash(const BenchSpec& spec) {
    json j = to_json(spec);
    j.erase("output");
    j.erase("threads");  // does not change results
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

EpisodeOutcome play_episode(const LoadedGame& game, std::size_t level, Agent& agent, std::uint64_t seed, std::int64_t max_ticks) {
    GameState s = game.start(level, seed);
    agent.reset();
    while (s.status == Status::Running && (max_ticks < 0 || s.tick < max_ticks)) advance(s, agent.act(s));
    return {s.score, s.status, s.tick};
}

int BenchReport::failures() const {
    int n = 0;
    for (const auto& c : cells) n += c.failures;
    return n;
}

const BenchCell* BenchReport::find(std::string_view game, AgentKind agent) const {
    for (const auto& c : cells) {
        if (c.game == game && c.agent == agent) return &c;
    }
    return nullptr;
}

namespace {

void run_cell(const BenchSpec& spec, const Corpus& corpus, const AgentConfig& cfg, BenchCell& cell) {
    const LoadedGame* game = nullptr;
    try {
        game = &corpus.get(cell.game);
        if (static_cast<std::size_t>(spec.level) >= game->levels.size()) {
            throw Error(ErrorKind::BadLevel, "level " + std::to_string(spec.level) + " not available");
        }
    } catch (const Error& e) {
        cell.failures = spec.episodes;
        cell.first_error = e.what();
        return;
    }
    for (int i = 0; i < spec.episodes; ++i) {
        std::uint64_t env_seed = spec.base_seed + static_cast<std::uint64_t>(i);
        AgentConfig c = cfg;
        c.seed = mix(cfg.seed, env_seed);
        try {
            auto agent = make_agent(c);
            cell.outcomes.push_back(play_episode(*game, static_cast<std::size_t>(spec.level), *agent, env_seed));
        } catch (const Error& e) {
            if (cell.failures++ == 0) cell.first_error = e.what();
        }
    }
    cell.episodes = static_cast<int>(cell.outcomes.size());
    if (cell.episodes == 0) return;
    double sum = 0, ticks = 0;
    int wins = 0;
    for (const auto& o : cell.outcomes) {
        sum += static_cast<double>(o.score);
        ticks += static_cast<double>(o.ticks);
        wins += o.status == Status::Win;
    }
    cell.mean_score = sum / cell.episodes;
    double var = 0;
    for (const auto& o : cell.outcomes) var += (static_cast<double>(o.score) - cell.mean_score) * (static_cast<double>(o.score) - cell.mean_score);
    cell.std_score = std::sqrt(var / cell.episodes);
    cell.win_rate = static_cast<double>(wins) / cell.episodes;
    cell.mean_ticks = ticks / cell.episodes;
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec, const Corpus& corpus) {
    BenchReport r;
    r.spec = spec;
    r.config_hash = bench_config_hash(spec);
    std::vector<const AgentConfig*> cfgs;
    for (const auto& g : spec.games) {
        for (const auto& a : spec.agents) {
            BenchCell c;
            c.game = g;
            c.agent = a.kind;
            c.ref_score = reference_score(g, a.kind);
            r.cells.push_back(std::move(c));
            cfgs.push_back(&a);
        }
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < r.cells.size(); i = next++) run_cell(spec, corpus, *cfgs[i], r.cells[i]);
    };
    int n = std::min<int>(spec.threads, static_cast<int>(r.cells.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return r;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string bench_csv(const BenchReport& r) {
    std::ostringstream out;
    out << "schema_version,game,agent,episodes,mean_score,std_score,win_rate,mean_ticks,ref_score,failures,base_seed,"
           "config_hash,engine_version\n";
    for (const auto& c : r.cells) {
        out << kBenchSchemaVersion << ',' << c.game << ',' << to_string(c.agent) << ',' << c.episodes << ','
            << fmt(c.mean_score) << ',' << fmt(c.std_score) << ',' << fmt(c.win_rate) << ',' << fmt(c.mean_ticks) << ','
            << (c.ref_score ? fmt(*c.ref_score) : "") << ',' << c.failures << ',' << r.spec.base_seed << ','
            << r.config_hash << ',' << kEngineVersion << '\n';
    }
    return out.str();
}

std::string bench_table(const BenchReport& r) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-7s %5s %10s %9s %6s %8s %10s %5s\n", "game", "agent", "eps", "mean", "std", "win",
                  "ticks", "ref*", "fail");
    out << line;
    for (const auto& c : r.cells) {
        char ref[32] = "-";
        if (c.ref_score) std::snprintf(ref, sizeof ref, "%.1f", *c.ref_score);
        std::snprintf(line, sizeof line, "%-20s %-7s %5d %10.2f %9.2f %6.2f %8.1f %10s %5d\n", c.game.c_str(),
                      std::string(to_string(c.agent)).c_str(), c.episodes, c.mean_score, c.std_score, c.win_rate, c.mean_ticks,
                      ref, c.failures);
        out << line;
    }
    out << "* reference scores from the original comparison table; annotation only, the games here are reconstructions\n";
    out << "config " << r.config_hash << ", base seed " << r.spec.base_seed << ", " << kEngineVersion << '\n';
    return out.str();
}

std::optional<double> reference_score(std::string_view game, AgentKind agent) {
    // columns: Random, GA, MCTS, IW
    static const std::map<std::string, std::array<double, 4>, std::less<>> table = {
        {"aliens", {52, 80.4, 72.6, 80.2}},         {"wait_for_breakfast", {0, 1, 0.4, 1}},
        {"frogs", {-2, 1, -0.4, 1}},                {"missile_command", {-2.2, 2.6, -3, 6.8}},
        {"seaquest", {17.2, 435, 638.2, 224.6}},    {"boulderdash", {1.4, 3.4, 16.4, 8.8}},
        {"zelda", {-5.2, 3.4, 6.8, 7.6}},           {"superman", {4, 157, 6699, 130.2}},
    };
    auto it = table.find(game);
    if (it == table.end()) return std::nullopt;
    switch (agent) {
        case AgentKind::Random: return it->second[0];
        case AgentKind::GA: return it->second[1];
        case AgentKind::MCTS: return it->second[2];
        case AgentKind::IW: return it->second[3];
    }
    return std::nullopt;
}

}  // namespace gvg
