// Acceptance run: one PASS/FAIL line per primary criterion, exit status 1 if any fails.
// Indented lines under a verdict are details.
#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "fuzz_lines.hpp"
#include "gvg/bench.hpp"
#include "gvg/server.hpp"

using namespace gvg;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void verdict(bool ok, const char* name, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

void note(const std::string& s) {
    std::printf("      %s\n", s.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Action random_action(const GameState& s, Rng& r) {
    auto acts = s.actions.view();
    return acts[r.uniform(static_cast<std::uint32_t>(acts.size()))];
}

std::uint64_t digest(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto b : bytes) h = (h ^ b) * 1099511628211ULL;
    return h;
}

// ---- determinism ----

std::vector<std::uint64_t> trajectories(const Corpus& corpus, int episodes) {
    std::vector<std::uint64_t> out;
    for (const auto& id : corpus.ids()) {
        const auto& g = corpus.get(id);
        for (int e = 0; e < episodes; ++e) {
            auto seed = static_cast<std::uint64_t>(1000 + e);
            Rng policy(seed * 7 + 3);
            auto s = g.start(static_cast<std::size_t>(e) % g.levels.size(), seed);
            out.push_back(digest(serialize_state(s)));
            while (s.status == Status::Running) {
                advance(s, random_action(s, policy));
                out.push_back(digest(serialize_state(s)));
            }
        }
    }
    return out;
}

void determinism(const Corpus& corpus) {
    auto t0 = Clock::now();
    auto a = trajectories(corpus, 50);
    auto b = trajectories(corpus, 50);
    std::size_t diff = a.size() == b.size() ? 0 : 1;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) diff += a[i] != b[i];

    auto spec = parse_bench_spec(json::parse(R"({
        "games": ["aliens", "boulderdash", "frogs", "missile_command", "seaquest", "superman", "wait_for_breakfast", "zelda"],
        "agents": ["Random",
                   {"kind": "GA", "budget": {"rollouts": 24}},
                   {"kind": "MCTS", "budget": {"rollouts": 24}},
                   {"kind": "IW", "budget": {"rollouts": 100}}],
        "episodes": 50, "base_seed": 1000})"));
    spec.agents.resize(1);
    auto r1 = bench_csv(run_bench(spec, corpus));
    auto r2 = bench_csv(run_bench(spec, corpus));
    // planners at a small budget, fewer episodes
    auto planners = parse_bench_spec(json::parse(R"({
        "games": ["aliens", "boulderdash", "frogs", "missile_command", "seaquest", "superman", "wait_for_breakfast", "zelda"],
        "agents": [{"kind": "GA", "budget": {"rollouts": 24}},
                   {"kind": "MCTS", "budget": {"rollouts": 24}},
                   {"kind": "IW", "budget": {"rollouts": 100}}],
        "episodes": 3, "base_seed": 1000})"));
    auto p1 = bench_csv(run_bench(planners, corpus));
    auto p2 = bench_csv(run_bench(planners, corpus));
    double secs = seconds_since(t0);
    bool ok = diff == 0 && r1 == r2 && p1 == p2 && secs < 120;
    verdict(ok, "determinism",
            fmt("%zu states over 400 episodes, %zu mismatches; bench reports %s; %.1fs (target < 120s)", a.size(), diff,
                r1 == r2 && p1 == p2 ? "identical" : "DIFFER", secs));
}

// ---- forward model ----

void fidelity(const Corpus& corpus) {
    const int kProbes = 10000;
    Rng r(42);
    int probes = 0, bad_copy = 0, bad_restore = 0;
    const auto ids = corpus.ids();
    while (probes < kProbes) {
        const auto& g = corpus.get(ids[r.uniform(static_cast<std::uint32_t>(ids.size()))]);
        auto s = g.start(r.uniform(static_cast<std::uint32_t>(g.levels.size())), r.next());
        int walk = static_cast<int>(r.uniform(200));
        for (int i = 0; i < walk && s.status == Status::Running; ++i) advance(s, random_action(s, r));
        // probe along the rest of this episode
        for (int k = 0; k < 25 && s.status == Status::Running && probes < kProbes; ++k, ++probes) {
            Action a = random_action(s, r);
            GameState copy = clone_state(s);
            GameState restored = deserialize_state(g.compiled, serialize_state(s));
            advance(copy, a);
            advance(restored, a);
            advance(s, a);
            auto want = serialize_state(s);
            bad_copy += serialize_state(copy) != want;
            bad_restore += serialize_state(restored) != want;
        }
    }
    verdict(bad_copy == 0 && bad_restore == 0, "forward-model fidelity",
            fmt("%d probes; clone mismatches %d, serialize-restore mismatches %d", probes, bad_copy, bad_restore));
}

// ---- planning pattern ----

void table_pattern(const Corpus& corpus) {
    auto t0 = Clock::now();
    auto spec = parse_bench_spec(json::parse(R"({
        "games": ["aliens", "wait_for_breakfast", "frogs", "missile_command", "seaquest", "boulderdash", "zelda", "superman"],
        "agents": ["Random", "GA", "MCTS", "IW"],
        "episodes": 20, "base_seed": 1})"));
    spec.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto report = run_bench(spec, corpus);
    std::ofstream("acceptance_bench.csv") << bench_csv(report);
    for (std::istringstream t(bench_table(report)); !t.eof();) {
        std::string line;
        std::getline(t, line);
        if (!line.empty()) note(line);
    }
    auto cell = [&](const char* game, AgentKind k) { return *report.find(game, k); };
    bool random_frogs = cell("frogs", AgentKind::Random).win_rate == 0.0;
    bool frogs = cell("frogs", AgentKind::IW).win_rate >= 0.9 && cell("frogs", AgentKind::GA).win_rate >= 0.9;
    bool breakfast = cell("wait_for_breakfast", AgentKind::GA).win_rate == 1.0 && cell("wait_for_breakfast", AgentKind::IW).win_rate == 1.0;
    double gap = cell("aliens", AgentKind::MCTS).mean_score - cell("aliens", AgentKind::Random).mean_score;
    bool aliens = gap >= 15;
    bool dominance = true;
    std::string counts;
    for (auto k : {AgentKind::GA, AgentKind::MCTS, AgentKind::IW}) {
        int n = 0;
        for (const auto& g : spec.games) n += cell(g.c_str(), k).mean_score >= cell(g.c_str(), AgentKind::Random).mean_score;
        dominance = dominance && n >= 6;
        counts += fmt(" %s %d/8", std::string(to_string(k)).c_str(), n);
    }
    note(fmt("random never wins frogs: %s", random_frogs ? "yes" : "NO"));
    note(fmt("frogs win rate GA %.2f IW %.2f (need >= 0.9)", cell("frogs", AgentKind::GA).win_rate, cell("frogs", AgentKind::IW).win_rate));
    note(fmt("wait_for_breakfast win rate GA %.2f IW %.2f (need 1.0)", cell("wait_for_breakfast", AgentKind::GA).win_rate,
             cell("wait_for_breakfast", AgentKind::IW).win_rate));
    note(fmt("aliens MCTS - Random = %.2f (need >= 15)", gap));
    note("planner >= random on games:" + counts + " (need >= 6/8 each)");
    verdict(random_frogs && frogs && breakfast && aliens && dominance, "planning pattern",
            fmt("20 episodes/cell, default rollout budgets, %.0fs", seconds_since(t0)));
}

// ---- telescoping ----

void telescoping(const Corpus& corpus) {
    Rng r(7);
    int episodes = 0, bad_reward = 0, bad_events = 0;
    const auto ids = corpus.ids();
    for (int e = 0; e < 1000; ++e) {
        const auto& g = corpus.get(ids[static_cast<std::size_t>(e) % ids.size()]);
        auto s = g.start(static_cast<std::size_t>(e / 8) % g.levels.size(), static_cast<std::uint64_t>(e));
        std::int64_t rewards = 0, points = 0, bonus = 0;
        while (s.status == Status::Running) {
            auto res = advance(s, random_action(s, r));
            rewards += res.reward;
            bonus += res.bonus;
            for (const auto& ev : res.events) points += ev.score;
        }
        bad_reward += rewards != s.score;
        bad_events += points + bonus != s.score;
        ++episodes;
    }
    verdict(bad_reward == 0 && bad_events == 0, "reward telescoping",
            fmt("%d episodes; sum(reward) != score in %d, sum(event points)+bonus != score in %d", episodes, bad_reward, bad_events));
}

// ---- protocol ----

bool replay(const Corpus& corpus, const std::string& name, std::size_t& lines) {
    std::ifstream in(std::string(GVG_SOURCE_DIR) + "/tests/golden/" + name, std::ios::binary);
    if (!in) return false;
    Session s(std::make_shared<const Corpus>(corpus), {}, [] { return 0; });
    std::string req, rep;
    while (std::getline(in, req) && std::getline(in, rep)) {
        if (!req.starts_with(">") || !rep.starts_with("< ")) return false;
        std::string line = req.size() > 2 ? req.substr(2) : "";
        if (s.handle_line(line) != rep.substr(2)) return false;
        ++lines;
    }
    return lines > 0;
}

struct FuzzTally {
    long sent = 0, errors = 0, crashes = 0, other = 0;
};

void fuzz_session(const Corpus& corpus, bool live, long count, std::uint64_t seed, FuzzTally& t) {
    auto shared = std::make_shared<const Corpus>(corpus);
    Session s(shared, {});
    std::optional<ActionSpace> acts;
    if (live) {
        s.handle_line(R"({"type":"reset","game":"zelda","seed":1})");
        acts = corpus.get("zelda").start(0, 1).actions;
    }
    test::FuzzLines gen(seed);
    while (t.sent < count) {
        std::string line = gen.next();
        if (test::well_formed(line, corpus, acts ? &*acts : nullptr)) continue;
        ++t.sent;
        try {
            auto j = json::parse(s.handle_line(line));
            if (j.value("type", "") == "error") {
                ++t.errors;
            } else {
                ++t.other;
            }
        } catch (...) {
            ++t.crashes;
        }
    }
}

long fuzz_tcp(const Corpus& corpus, long count, long& errors) {
    Server server(std::make_shared<const Corpus>(corpus), {});
    server.bind("127.0.0.1:0");
    std::thread th([&] { server.run(); });
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(server.port()));
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    long answered = 0;
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) {
        timeval tv{10, 0};
        ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
        test::FuzzLines gen(99);
        std::string buf;
        for (long i = 0; i < count;) {
            std::string line = gen.next();
            if (line.find('\r') != std::string::npos || test::well_formed(line, corpus, nullptr)) continue;
            ++i;
            line += '\n';
            if (::send(fd, line.data(), line.size(), MSG_NOSIGNAL) != static_cast<ssize_t>(line.size())) break;
            while (buf.find('\n') == std::string::npos) {
                char chunk[8192];
                ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
                if (n <= 0) goto done;
                buf.append(chunk, static_cast<std::size_t>(n));
            }
            auto nl = buf.find('\n');
            auto j = json::parse(buf.substr(0, nl), nullptr, false);
            buf.erase(0, nl + 1);
            ++answered;
            errors += !j.is_discarded() && j.value("type", "") == "error";
        }
    }
done:
    ::close(fd);
    server.stop();
    th.join();
    return answered;
}

void protocol(const Corpus& corpus) {
    auto t0 = Clock::now();
    std::size_t lines = 0;
    bool golden = true;
    for (const char* name : {"random_session.txt", "error_session.txt", "pixel_session.txt"}) golden = replay(corpus, name, lines) && golden;
    FuzzTally t;
    fuzz_session(corpus, false, 500000, 1, t);
    FuzzTally u;
    fuzz_session(corpus, true, 500000, 2, u);
    long tcp_errors = 0;
    long tcp = fuzz_tcp(corpus, 20000, tcp_errors);
    long sent = t.sent + u.sent;
    long errors = t.errors + u.errors;
    long crashes = t.crashes + u.crashes;
    bool ok = golden && sent == 1000000 && errors == sent && crashes == 0 && tcp == 20000 && tcp_errors == tcp;
    verdict(ok, "protocol conformance",
            fmt("golden %s (%zu exchanges); fuzz %ld lines, %ld error replies, %ld crashes; tcp %ld/%d answered with errors; %.0fs",
                golden ? "byte-identical" : "MISMATCH", lines, sent, errors, crashes, tcp_errors, 20000, seconds_since(t0)));
}

// ---- throughput ----

void throughput(const Corpus& corpus) {
    const auto& g = corpus.get("aliens");
    Rng r(5);
    std::int64_t ticks = 0;
    auto t0 = Clock::now();
    double secs = 0;
    std::uint64_t seed = 0;
    while (secs < 3.0) {
        auto s = g.start(0, seed++);
        while (s.status == Status::Running) {
            advance(s, random_action(s, r));
            ++ticks;
        }
        secs = seconds_since(t0);
    }
    double rate = static_cast<double>(ticks) / secs;
    verdict(rate >= 5000, "throughput", fmt("aliens level 0: %.0f ticks/s over %lld ticks (need >= 5000)", rate, static_cast<long long>(ticks)));
}

}  // namespace

int main(int argc, char** argv) {
    // optional filter: run only the named criteria
    std::vector<std::string> only(argv + 1, argv + argc);
    auto want = [&](const std::string& n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };
    Corpus corpus = Corpus::load();
    std::printf("gvg acceptance (%s)\n", std::string(kEngineVersion).c_str());
    const std::pair<const char*, std::function<void(const Corpus&)>> criteria[] = {
        {"determinism", determinism}, {"fidelity", fidelity},   {"pattern", table_pattern},
        {"telescoping", telescoping}, {"protocol", protocol},   {"throughput", throughput},
    };
    for (const auto& [name, fn] : criteria) {
        if (!want(name)) continue;
        try {
            fn(corpus);
        } catch (const std::exception& e) {
            verdict(false, name, std::string("threw: ") + e.what());
        }
    }
    std::printf("%s\n", g_failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
    return g_failed ? 1 : 0;
}
