#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

#include "gvg/bench.hpp"
#include "gvg/curves.hpp"
#include "gvg/play.hpp"
#include "gvg/server.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCorpus = 2;
constexpr int kExitBenchFailures = 3;

gvg::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gvgai: VGDL game engine, planning agents and environment server"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string games_dir = gvg::default_games_dir().string();
    app.add_option("--games", games_dir, "corpus directory (holds manifest.txt)");

    auto* play = app.add_subcommand("play", "play a game in the terminal");
    std::string play_game;
    std::size_t play_level = 0;
    std::uint64_t play_seed = 0;
    int tick_ms = 150;
    std::string script;
    play->add_option("game", play_game, "game id")->required();
    play->add_option("--level", play_level, "level index");
    play->add_option("--seed", play_seed, "episode seed");
    play->add_option("--tick-ms", tick_ms, "milliseconds per tick")->check(CLI::PositiveNumber);
    play->add_option("--script", script, "key sequence instead of the keyboard ('.' = no key)");

    auto* validate = app.add_subcommand("validate", "load every game and play random episodes");
    int val_episodes = 100;
    validate->add_option("--episodes", val_episodes, "random episodes per game")->check(CLI::NonNegativeNumber);

    auto* serve = app.add_subcommand("serve", "run the environment server");
    std::string bind = "127.0.0.1:7654";
    std::string budget = "off";
    std::string obs = "grid";
    std::int64_t learning_ms = 0;
    serve->add_option("--bind", bind, "host:port");
    serve->add_option("--budget-ms", budget, "decision budget in ms, or off");
    serve->add_option("--obs", obs, "default observation mode")->check(CLI::IsMember({"grid", "pixels", "both"}));
    serve->add_option("--learning-ms", learning_ms, "per-session learning clock for resets (0 = unlimited)");

    auto* bench = app.add_subcommand("bench", "run planning agents over games");
    std::string bench_config;
    std::string bench_out;
    bench->add_option("config", bench_config, "JSON bench config")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", bench_out, "CSV output path (overrides the config)");

    auto* curves = app.add_subcommand("curves", "plot training logs");
    std::vector<std::string> logs;
    std::string curves_out = "curves";
    int window = gvg::kSmoothingWindow;
    curves->add_option("logs", logs, "training log files")->required();
    curves->add_option("--out", curves_out, "output directory");
    curves->add_option("--window", window, "smoothing window in episodes")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate) {
            auto report = gvg::validate_corpus(games_dir, val_episodes);
            for (const auto& g : report.games) {
                if (g.ok) {
                    std::printf("ok    %-20s episodes %d wins %d score [%lld, %lld] mean %.2f ticks %.1f\n", g.id.c_str(),
                                g.episodes, g.wins, static_cast<long long>(g.min_score), static_cast<long long>(g.max_score),
                                g.mean_score, g.mean_ticks);
                } else {
                    std::printf("FAIL  %-20s %s\n", g.id.c_str(), g.error.c_str());
                }
            }
            std::printf("%d/%zu games valid\n", report.passed(), report.games.size());
            return report.passed() == static_cast<int>(report.games.size()) ? kExitOk : kExitCorpus;
        }

        gvg::Corpus corpus;
        try {
            corpus = gvg::Corpus::load(games_dir);
        } catch (const gvg::Error& e) {
            std::cerr << "corpus error: " << e.what() << '\n';
            return kExitCorpus;
        }

        if (*play) {
            if (!corpus.contains(play_game)) {
                std::cerr << "unknown game '" << play_game << "'\n";
                return kExitUsage;
            }
            const auto& game = corpus.get(play_game);
            std::unique_ptr<gvg::KeySource> keys;
            if (script.empty()) {
                keys = std::make_unique<gvg::TerminalKeys>();
            } else {
                keys = std::make_unique<gvg::ScriptedKeys>(script);
            }
            gvg::play_human(game, play_level, play_seed, *keys, std::cout, script.empty() ? tick_ms : 0);
            return kExitOk;
        }

        if (*serve) {
            gvg::ServerConfig cfg;
            if (budget != "off") {
                try {
                    cfg.budget_ms = std::stoll(budget);
                } catch (const std::exception&) {
                    std::cerr << "--budget-ms takes a number or off\n";
                    return kExitUsage;
                }
                if (*cfg.budget_ms < 1) {
                    std::cerr << "--budget-ms must be positive\n";
                    return kExitUsage;
                }
            }
            if (learning_ms > 0) cfg.learning_ms = learning_ms;
            cfg.default_obs = *gvg::parse_obs_mode(obs);
            gvg::Server server(std::make_shared<const gvg::Corpus>(std::move(corpus)), cfg);
            server.bind(bind);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "serving on port " << server.port() << '\n';
            server.run();
            g_server = nullptr;
            return kExitOk;
        }

        if (*bench) {
            gvg::BenchSpec spec;
            try {
                std::ifstream in(bench_config);
                spec = gvg::parse_bench_spec(nlohmann::json::parse(in));
            } catch (const nlohmann::json::exception& e) {
                std::cerr << "bad bench config: " << e.what() << '\n';
                return kExitUsage;
            }
            if (!bench_out.empty()) spec.output = bench_out;
            for (const auto& g : spec.games) {
                if (!corpus.contains(g)) {
                    std::cerr << "unknown game '" << g << "' in bench config\n";
                    return kExitUsage;
                }
            }
            auto report = gvg::run_bench(spec, corpus);
            std::cout << gvg::bench_table(report);
            if (!spec.output.empty()) {
                std::ofstream out(spec.output);
                out << gvg::bench_csv(report);
                if (!out) throw gvg::Error(gvg::ErrorKind::Io, "cannot write " + spec.output);
            }
            for (const auto& c : report.cells) {
                if (c.failures) std::cerr << c.game << "/" << gvg::to_string(c.agent) << ": " << c.first_error << '\n';
            }
            return report.failures() ? kExitBenchFailures : kExitOk;
        }

        if (*curves) {
            std::vector<std::filesystem::path> paths(logs.begin(), logs.end());
            for (const auto& p : gvg::emit_curves(paths, curves_out, window)) std::cout << p.string() << '\n';
            return kExitOk;
        }
    } catch (const gvg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
