#include "gvg/agents.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>

namespace gvg {

std::string_view to_string(AgentKind k) {
    switch (k) {
        case AgentKind::Random: return "Random";
        case AgentKind::GA: return "GA";
        case AgentKind::MCTS: return "MCTS";
        case AgentKind::IW: return "IW";
    }
    return "?";
}

std::optional<AgentKind> parse_agent_kind(std::string_view name) {
    for (auto k : {AgentKind::Random, AgentKind::GA, AgentKind::MCTS, AgentKind::IW}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

int default_rollouts(AgentKind kind) {
    switch (kind) {
        case AgentKind::MCTS: return 400;
        case AgentKind::GA: return 240;
        case AgentKind::IW: return 2000;
        case AgentKind::Random: return 0;
    }
    return 0;
}

std::unique_ptr<Agent> make_agent(const AgentConfig& c) {
    const PlanBudget& b = c.budget;
    switch (c.kind) {
        case AgentKind::Random: return std::make_unique<RandomAgent>(c.seed);
        case AgentKind::GA: return std::make_unique<GaAgent>(c.seed, b, c.ga);
        case AgentKind::MCTS: return std::make_unique<MctsAgent>(c.seed, b, c.mcts);
        case AgentKind::IW: return std::make_unique<IwAgent>(c.seed, b, c.iw);
    }
    return nullptr;
}

namespace {

PlanBudget with_default(PlanBudget b, AgentKind kind) {
    if (b.mode == PlanBudget::Mode::Rollouts && b.rollouts < 0) b.rollouts = default_rollouts(kind);
    return b;
}

/// Budget check shared by the planners: `spent` units in rollout mode, elapsed
/// time in wall-clock mode.
class Allowance {
public:
    explicit Allowance(const PlanBudget& b) : budget_(b), start_(std::chrono::steady_clock::now()) {}

    bool exhausted(int spent) const {
        if (budget_.mode == PlanBudget::Mode::Rollouts) return spent >= budget_.rollouts;
        auto elapsed = std::chrono::steady_clock::now() - start_;
        return elapsed >= std::chrono::milliseconds(budget_.millis);
    }

private:
    PlanBudget budget_;
    std::chrono::steady_clock::time_point start_;
};

Action nil_or_first(const GameState& s) {
    if (s.actions.contains(Action::Nil)) return Action::Nil;
    return s.actions.size ? s.actions[0] : Action::Nil;
}

}  // namespace

Action RandomAgent::act(const GameState& state) {
    auto acts = state.actions.view();
    if (acts.empty()) return Action::Nil;
    return acts[rng_.uniform(static_cast<std::uint32_t>(acts.size()))];
}

// ---- MCTS ----

MctsAgent::MctsAgent(std::uint64_t seed, PlanBudget budget, MctsParams params)
    : rng_(seed), budget_(with_default(budget, AgentKind::MCTS)), params_(params) {}

namespace {

struct TreeNode {
    int parent = -1;
    int depth = 0;
    std::array<int, 6> children{-1, -1, -1, -1, -1, -1};
    int expanded = 0;
    int visits = 0;
    double value = 0;  // sum of normalised returns
    bool terminal = false;
};

}  // namespace

Action MctsAgent::act(const GameState& root) {
    const auto acts = root.actions.view();
    const int n_actions = static_cast<int>(acts.size());
    stats_ = {};
    stats_.root_visits.assign(static_cast<std::size_t>(n_actions), 0);
    Allowance allowance(budget_);
    if (root.status != Status::Running || n_actions == 0 || allowance.exhausted(0)) return nil_or_first(root);

    std::vector<TreeNode> tree(1);
    tree.reserve(budget_.mode == PlanBudget::Mode::Rollouts ? static_cast<std::size_t>(budget_.rollouts) + 1 : 1024);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::vector<int> untried;

    while (!allowance.exhausted(stats_.simulations)) {
        GameState s = root;
        int node = 0;
        // selection
        while (!tree[static_cast<std::size_t>(node)].terminal && tree[static_cast<std::size_t>(node)].expanded == n_actions &&
               tree[static_cast<std::size_t>(node)].depth < params_.depth) {
            const auto& nd = tree[static_cast<std::size_t>(node)];
            double log_n = std::log(static_cast<double>(std::max(1, nd.visits)));
            int best = -1;
            double best_u = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < n_actions; ++a) {
                const auto& ch = tree[static_cast<std::size_t>(nd.children[static_cast<std::size_t>(a)])];
                double u = ch.value / ch.visits + params_.exploration * std::sqrt(log_n / ch.visits);
                // tiny seeded jitter breaks exact ties without biasing towards low indices
                u += 1e-9 * rng_.unit();
                if (u > best_u) {
                    best_u = u;
                    best = a;
                }
            }
            advance(s, acts[static_cast<std::size_t>(best)]);
            node = nd.children[static_cast<std::size_t>(best)];
        }
        // expansion
        auto& cur = tree[static_cast<std::size_t>(node)];
        if (!cur.terminal && cur.depth < params_.depth && cur.expanded < n_actions) {
            untried.clear();
            for (int a = 0; a < n_actions; ++a) {
                if (cur.children[static_cast<std::size_t>(a)] < 0) untried.push_back(a);
            }
            int a = untried[rng_.uniform(static_cast<std::uint32_t>(untried.size()))];
            advance(s, acts[static_cast<std::size_t>(a)]);
            TreeNode child;
            child.parent = node;
            child.depth = cur.depth + 1;
            child.terminal = s.status != Status::Running;
            cur.children[static_cast<std::size_t>(a)] = static_cast<int>(tree.size());
            ++cur.expanded;
            tree.push_back(child);
            node = static_cast<int>(tree.size()) - 1;
        }
        // rollout
        int depth = tree[static_cast<std::size_t>(node)].depth;
        while (s.status == Status::Running && depth < params_.depth) {
            advance(s, acts[rng_.uniform(static_cast<std::uint32_t>(n_actions))]);
            ++depth;
        }
        // backup
        double raw = static_cast<double>(s.score);
        lo = std::min(lo, raw);
        hi = std::max(hi, raw);
        double v;
        if (s.status == Status::Win) {
            v = 1.0;
        } else if (s.status == Status::Lose) {
            v = 0.0;
        } else {
            v = hi > lo ? (raw - lo) / (hi - lo) : 0.5;
        }
        for (int k = node; k >= 0; k = tree[static_cast<std::size_t>(k)].parent) {
            ++tree[static_cast<std::size_t>(k)].visits;
            tree[static_cast<std::size_t>(k)].value += v;
        }
        ++stats_.simulations;
    }

    if (stats_.simulations == 0) return nil_or_first(root);
    int best_visits = -1;
    std::vector<int> tied;
    for (int a = 0; a < n_actions; ++a) {
        int c = tree[0].children[static_cast<std::size_t>(a)];
        int visits = c >= 0 ? tree[static_cast<std::size_t>(c)].visits : 0;
        stats_.root_visits[static_cast<std::size_t>(a)] = visits;
        if (visits > best_visits) {
            best_visits = visits;
            tied.assign(1, a);
        } else if (visits == best_visits) {
            tied.push_back(a);
        }
    }
    int pick = tied.size() == 1 ? tied[0] : tied[rng_.uniform(static_cast<std::uint32_t>(tied.size()))];
    return acts[static_cast<std::size_t>(pick)];
}

// ---- rolling-horizon GA ----

GaAgent::GaAgent(std::uint64_t seed, PlanBudget budget, GaParams params)
    : rng_(seed), budget_(with_default(budget, AgentKind::GA)), params_(params) {
    if (params_.mutation_rate <= 0) params_.mutation_rate = 1.0 / std::max(1, params_.genome_length);
}

double GaAgent::evaluate(const GameState& root, const std::vector<Action>& genome) const {
    GameState s = root;
    int steps = 0;
    for (Action a : genome) {
        if (s.status != Status::Running) break;
        advance(s, a);
        ++steps;
    }
    double f = static_cast<double>(s.score);
    // earlier wins and later losses rank higher
    if (s.status == Status::Win) f += params_.win_bonus - steps;
    if (s.status == Status::Lose) f -= params_.loss_penalty - steps;
    return f;
}

Action GaAgent::act(const GameState& root) {
    const auto acts = root.actions.view();
    const auto n_actions = static_cast<std::uint32_t>(acts.size());
    const auto len = static_cast<std::size_t>(std::max(1, params_.genome_length));
    const int pop_size = std::max(2, params_.population);
    stats_ = {};
    Allowance allowance(budget_);
    if (root.status != Status::Running || n_actions == 0 || allowance.exhausted(0)) return nil_or_first(root);

    auto random_action = [&] { return acts[rng_.uniform(n_actions)]; };
    struct Individual {
        std::vector<Action> genes;
        double fitness = 0;
    };
    std::vector<Individual> pop;
    pop.reserve(static_cast<std::size_t>(pop_size));

    bool carried_ok = carried_.size() == len &&
                      std::all_of(carried_.begin(), carried_.end(), [&](Action a) { return root.actions.contains(a); });
    for (int i = 0; i < pop_size; ++i) {
        Individual ind;
        if (i == 0 && carried_ok) {
            ind.genes.assign(carried_.begin() + 1, carried_.end());
            ind.genes.push_back(random_action());
        } else {
            ind.genes.resize(len);
            for (auto& g : ind.genes) g = random_action();
            // cover every first move at least once
            ind.genes[0] = acts[static_cast<std::size_t>(i) % n_actions];
        }
        pop.push_back(std::move(ind));
    }

    std::size_t best = 0;
    auto consider = [&](std::size_t i) {
        if (stats_.evaluations == 1 || pop[i].fitness > pop[best].fitness) best = i;
    };
    int evaluated = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (allowance.exhausted(stats_.evaluations)) break;
        pop[i].fitness = evaluate(root, pop[i].genes);
        ++stats_.evaluations;
        ++evaluated;
        consider(i);
    }
    pop.resize(static_cast<std::size_t>(std::max(1, evaluated)));
    if (evaluated == 0) return nil_or_first(root);
    stats_.generations = 1;

    auto tournament = [&]() -> const Individual& {
        const auto& a = pop[rng_.uniform(static_cast<std::uint32_t>(pop.size()))];
        const auto& b = pop[rng_.uniform(static_cast<std::uint32_t>(pop.size()))];
        return b.fitness > a.fitness ? b : a;
    };

    while (!allowance.exhausted(stats_.evaluations)) {
        std::vector<std::size_t> order(pop.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pop[x].fitness > pop[y].fitness; });
        std::vector<Individual> next;
        next.reserve(static_cast<std::size_t>(pop_size));
        for (int e = 0; e < params_.elites && e < static_cast<int>(order.size()); ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);
        best = 0;
        bool exhausted = false;
        while (static_cast<int>(next.size()) < pop_size) {
            if (allowance.exhausted(stats_.evaluations)) {
                exhausted = true;
                break;
            }
            const auto& p1 = tournament();
            const auto& p2 = tournament();
            Individual child;
            child.genes.resize(len);
            for (std::size_t k = 0; k < len; ++k) {
                child.genes[k] = rng_.uniform(2) ? p2.genes[k] : p1.genes[k];
                if (rng_.bernoulli(params_.mutation_rate)) child.genes[k] = random_action();
            }
            child.fitness = evaluate(root, child.genes);
            ++stats_.evaluations;
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        for (std::size_t i = 1; i < pop.size(); ++i) {
            if (pop[i].fitness > pop[best].fitness) best = i;
        }
        ++stats_.generations;
        if (exhausted) break;
    }

    stats_.best_fitness = pop[best].fitness;
    stats_.best_genome = pop[best].genes;
    carried_ = pop[best].genes;
    return pop[best].genes.front();
}

// ---- IW(1) ----

IwAgent::IwAgent(std::uint64_t seed, PlanBudget budget, IwParams params)
    : rng_(seed), budget_(with_default(budget, AgentKind::IW)), params_(params) {}

namespace {

int status_rank(Status s) {
    switch (s) {
        case Status::Win: return 2;
        case Status::Running: return 1;
        default: return 0;
    }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

Action IwAgent::act(const GameState& root) {
    const auto acts = root.actions.view();
    stats_ = {};
    Allowance allowance(budget_);
    if (root.status != Status::Running || acts.empty() || allowance.exhausted(0)) return nil_or_first(root);

    const std::size_t cells = static_cast<std::size_t>(root.width * root.height);
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(root.game->type_count()) * cells, 0);
    const std::int64_t bucket = std::max<std::int64_t>(1, params_.score_bucket);
    std::int64_t best_bucket = floor_div(root.score, bucket);

    auto mark = [&](const GameState& s) {
        bool novel = false;
        for (const auto& sp : s.sprites) {
            if (!sp.alive) continue;
            auto k = static_cast<std::size_t>(sp.type) * cells + static_cast<std::size_t>(sp.y * s.width + sp.x);
            if (!seen[k]) {
                seen[k] = 1;
                novel = true;
            }
        }
        std::int64_t b = floor_div(s.score, bucket);
        if (b > best_bucket) {
            best_bucket = b;
            novel = true;
        }
        return novel;
    };
    mark(root);

    struct Node {
        GameState state;
        int first = -1;  // index into acts of the root action leading here
        int depth = 0;
    };
    struct Best {
        bool set = false;
        std::int64_t score = 0;
        int rank = 0;
        int depth = 0;
        int first = -1;
    } best;
    auto better = [&](std::int64_t score, int rank, int depth) {
        if (!best.set) return true;
        if (score != best.score) return score > best.score;
        if (rank != best.rank) return rank > best.rank;
        // reach a win or an improvement as soon as possible, otherwise look as far ahead as possible
        if (rank == 2 || score > root.score) return depth < best.depth;
        return depth > best.depth;
    };

    std::deque<Node> open;
    open.push_back({root, -1, 0});
    while (!open.empty() && !allowance.exhausted(stats_.generated)) {
        Node node = std::move(open.front());
        open.pop_front();
        ++stats_.expanded;
        for (std::size_t a = 0; a < acts.size(); ++a) {
            if (allowance.exhausted(stats_.generated)) break;
            GameState child = node.state;
            advance(child, acts[a]);
            ++stats_.generated;
            int first = node.first < 0 ? static_cast<int>(a) : node.first;
            bool novel = mark(child);
            if (!novel && child.status != Status::Win) continue;
            ++stats_.novel;
            int rank = status_rank(child.status);
            if (better(child.score, rank, node.depth + 1)) {
                best = {true, child.score, rank, node.depth + 1, first};
            }
            if (novel && child.status == Status::Running) open.push_back({std::move(child), first, node.depth + 1});
        }
    }
    if (!best.set) return nil_or_first(root);
    stats_.best_depth = best.depth;
    stats_.best_score = best.score;
    return acts[static_cast<std::size_t>(best.first)];
}

}  // namespace gvg
