#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "gvg/games.hpp"
#include "gvg/render.hpp"

namespace gvg {

inline constexpr int kProtocolVersion = 1;

enum class ObsMode { Grid, Pixels, Both };
std::string_view to_string(ObsMode m);
std::optional<ObsMode> parse_obs_mode(std::string_view s);

struct ServerConfig {
    std::optional<std::int64_t> budget_ms;    // decision budget; nullopt = off
    std::optional<std::int64_t> learning_ms;  // total session clock for resets; nullopt = unlimited
    ObsMode default_obs = ObsMode::Grid;
    int tile_size = kDefaultTileSize;
};

/// Monotonic milliseconds. Injectable so budget handling can be tested.
using MillisClock = std::function<std::int64_t()>;
MillisClock steady_millis();

/// One client connection's protocol state. handle_line is the whole protocol:
/// one request line in, one reply line out (no trailing newline).
class Session {
public:
    Session(std::shared_ptr<const Corpus> corpus, ServerConfig config, MillisClock clock = steady_millis());

    std::string handle_line(std::string_view line);
    bool closed() const { return closed_; }

    std::int64_t episodes() const { return episode_; }
    std::int64_t aborted_episodes() const { return aborted_; }

private:
    nlohmann::json on_hello();
    nlohmann::json on_reset(const nlohmann::json& msg);
    nlohmann::json on_step(const nlohmann::json& msg);
    nlohmann::json on_abort();
    nlohmann::json state_message(std::int64_t reward, bool late) const;

    std::shared_ptr<const Corpus> corpus_;
    ServerConfig config_;
    MillisClock clock_;
    const LoadedGame* game_ = nullptr;
    std::optional<GameState> state_;
    ObsMode obs_ = ObsMode::Grid;
    std::int64_t episode_ = 0;
    std::int64_t aborted_ = 0;
    std::int64_t last_reply_ms_ = 0;
    std::optional<std::int64_t> first_reset_ms_;
    bool closed_ = false;
};

nlohmann::json error_message(std::string_view code, std::string_view detail);
/// Compact, key-sorted, invalid UTF-8 replaced; the exact bytes the server sends.
std::string dump_message(const nlohmann::json& msg);

/// Line-delimited JSON over TCP, one thread per connection.
class Server {
public:
    Server(std::shared_ptr<const Corpus> corpus, ServerConfig config);
    ~Server();

    /// Binds "host:port" (port 0 picks a free one). Throws Io on failure.
    void bind(const std::string& address);
    int port() const { return port_; }
    /// Accept loop; returns after stop().
    void run();
    void stop();

private:
    void serve_connection(int fd);

    std::shared_ptr<const Corpus> corpus_;
    ServerConfig config_;
    int listen_fd_ = -1;
    int port_ = 0;
    std::atomic<bool> stopping_{false};
    std::atomic<int> active_{0};
};

inline constexpr std::size_t kMaxLineBytes = 1 << 20;

}  // namespace gvg
