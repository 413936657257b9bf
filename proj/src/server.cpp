#include "gvg/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

namespace gvg {

using nlohmann::json;

std::string_view to_string(ObsMode m) {
    switch (m) {
        case ObsMode::Grid: return "grid";
        case ObsMode::Pixels: return "pixels";
        case ObsMode::Both: return "both";
    }
    return "?";
}

std::optional<ObsMode> parse_obs_mode(std::string_view s) {
    for (auto m : {ObsMode::Grid, ObsMode::Pixels, ObsMode::Both}) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

MillisClock steady_millis() {
    return [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now().time_since_epoch()).count();
    };
}

json error_message(std::string_view code, std::string_view detail) {
    return json{{"type", "error"}, {"code", std::string(code)}, {"detail", std::string(detail)}};
}

std::string dump_message(const json& msg) { return msg.dump(-1, ' ', false, json::error_handler_t::replace); }

Session::Session(std::shared_ptr<const Corpus> corpus, ServerConfig config, MillisClock clock)
    : corpus_(std::move(corpus)), config_(config), clock_(std::move(clock)), obs_(config.default_obs) {}

namespace {

struct ProtocolError {
    std::string code;
    std::string detail;
};

}  // namespace

std::string Session::handle_line(std::string_view line) {
    json reply;
    if (closed_) {
        reply = error_message("Closed", "session is closed");
    } else {
        try {
            json msg = json::parse(line);
            if (!msg.is_object()) throw ProtocolError{"BadMessage", "message must be a JSON object"};
            auto t = msg.find("type");
            if (t == msg.end() || !t->is_string()) throw ProtocolError{"BadMessage", "missing string field 'type'"};
            const auto& type = t->get_ref<const std::string&>();
            if (type == "hello") {
                reply = on_hello();
            } else if (type == "reset") {
                reply = on_reset(msg);
            } else if (type == "step") {
                reply = on_step(msg);
            } else if (type == "abort") {
                reply = on_abort();
            } else if (type == "goodbye") {
                if (state_ && state_->status == Status::Running) ++aborted_;
                state_.reset();
                closed_ = true;
                reply = json{{"type", "goodbye"}};
            } else {
                throw ProtocolError{"UnknownType", "unknown message type '" + type + "'"};
            }
        } catch (const json::exception& e) {
            std::string detail = e.what();
            if (auto p = detail.find("] "); detail.starts_with("[json.") && p != std::string::npos) detail.erase(0, p + 2);
            reply = error_message("BadMessage", detail);
        } catch (const ProtocolError& e) {
            reply = error_message(e.code, e.detail);
        } catch (const Error& e) {
            reply = error_message(to_string(e.kind()), e.detail());
        }
    }
    last_reply_ms_ = clock_();
    return dump_message(reply);
}

json Session::on_hello() {
    return json{{"type", "welcome"}, {"protocol_version", kProtocolVersion}, {"games", corpus_->ids()}};
}

json Session::on_reset(const json& msg) {
    auto g = msg.find("game");
    if (g == msg.end() || !g->is_string()) throw ProtocolError{"BadMessage", "reset needs a string field 'game'"};
    std::int64_t level = 0;
    if (auto l = msg.find("level"); l != msg.end()) {
        if (!l->is_number_integer()) throw ProtocolError{"BadMessage", "'level' must be an integer"};
        level = l->get<std::int64_t>();
    }
    std::uint64_t seed = 0;
    if (auto s = msg.find("seed"); s != msg.end()) {
        if (!s->is_number_integer() || (s->is_number_integer() && !s->is_number_unsigned() && s->get<std::int64_t>() < 0)) {
            throw ProtocolError{"BadMessage", "'seed' must be a non-negative integer"};
        }
        seed = s->get<std::uint64_t>();
    }
    ObsMode obs = config_.default_obs;
    if (auto o = msg.find("obs_mode"); o != msg.end()) {
        auto parsed = o->is_string() ? parse_obs_mode(o->get_ref<const std::string&>()) : std::nullopt;
        if (!parsed) throw ProtocolError{"BadMessage", "'obs_mode' must be grid, pixels or both"};
        obs = *parsed;
    }
    std::int64_t now = clock_();
    if (config_.learning_ms && first_reset_ms_ && now - *first_reset_ms_ > *config_.learning_ms) {
        throw ProtocolError{"LearningTimeExpired", "session learning time is over"};
    }
    const LoadedGame& game = corpus_->get(g->get_ref<const std::string&>());
    if (level < 0 || static_cast<std::size_t>(level) >= game.levels.size()) {
        throw Error(ErrorKind::BadLevel, "game '" + game.manifest.id + "' has " + std::to_string(game.levels.size()) +
                                             " levels, requested " + std::to_string(level));
    }
    GameState fresh = game.start(static_cast<std::size_t>(level), seed);
    if (state_ && state_->status == Status::Running) ++aborted_;
    if (!first_reset_ms_) first_reset_ms_ = now;
    game_ = &game;
    state_ = std::move(fresh);
    obs_ = obs;
    ++episode_;
    return state_message(0, false);
}

json Session::on_step(const json& msg) {
    if (!state_ || state_->status != Status::Running) throw ProtocolError{"NoEpisode", "no running episode; send reset"};
    auto a = msg.find("action");
    if (a == msg.end()) throw ProtocolError{"BadMessage", "step needs field 'action'"};
    std::optional<Action> action;
    if (a->is_string()) {
        action = parse_action(a->get_ref<const std::string&>());
    } else if (a->is_number_integer()) {
        auto i = a->get<std::int64_t>();
        if (i >= 0 && i < state_->actions.size) action = state_->actions[static_cast<std::size_t>(i)];
    } else {
        throw ProtocolError{"BadMessage", "'action' must be a name or an index"};
    }
    if (!action || !state_->actions.contains(*action)) {
        std::string legal;
        for (Action x : state_->actions.view()) legal += (legal.empty() ? "" : ",") + std::string(to_string(x));
        throw Error(ErrorKind::IllegalAction, "illegal action " + a->dump() + "; legal: " + legal);
    }
    bool late = false;
    if (config_.budget_ms && clock_() - last_reply_ms_ > *config_.budget_ms) {
        late = true;
        action = Action::Nil;  // the budget overage policy; NIL is legal in every game
        if (!state_->actions.contains(Action::Nil)) action = state_->actions[0];
    }
    StepResult r = advance(*state_, *action);
    return state_message(r.reward, late);
}

json Session::on_abort() {
    if (!state_ || state_->status != Status::Running) throw ProtocolError{"NoEpisode", "no running episode to abort"};
    state_->status = Status::Aborted;
    ++aborted_;
    return state_message(0, false);
}

json Session::state_message(std::int64_t reward, bool late) const {
    const GameState& s = *state_;
    json obs = json::object();
    if (obs_ != ObsMode::Pixels) obs["grid"] = render_grid(s);
    if (obs_ != ObsMode::Grid) {
        PixelFrame f = render_pixels(s, config_.tile_size);
        obs["pixels"] = {{"width", f.width}, {"height", f.height}, {"format", "png"}, {"data", base64_encode(encode_png(f))}};
    }
    json actions = json::array();
    for (Action a : s.actions.view()) actions.push_back(std::string(to_string(a)));
    json info = {{"tick", s.tick},
                 {"score", s.score},
                 {"status", std::string(to_string(s.status))},
                 {"game", game_->manifest.id},
                 {"episode", episode_},
                 {"aborted_episodes", aborted_},
                 {"late", late},
                 {"actions", actions}};
    return json{{"type", "state"}, {"obs", obs}, {"reward", reward}, {"done", s.status != Status::Running}, {"info", info}};
}

// ---- TCP ----

Server::Server(std::shared_ptr<const Corpus> corpus, ServerConfig config) : corpus_(std::move(corpus)), config_(config) {}

Server::~Server() {
    stop();
    while (active_.load() > 0) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void Server::bind(const std::string& address) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Io, "bind address must be host:port, got '" + address + "'");
    std::string host = address.substr(0, colon);
    std::string port = address.substr(colon + 1);
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), port.c_str(), &hints, &res); rc != 0) {
        throw Error(ErrorKind::Io, "cannot resolve '" + address + "': " + gai_strerror(rc));
    }
    int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (fd < 0 || ::bind(fd, res->ai_addr, res->ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
        std::string why = std::strerror(errno);
        ::freeaddrinfo(res);
        if (fd >= 0) ::close(fd);
        throw Error(ErrorKind::Io, "cannot bind '" + address + "': " + why);
    }
    ::freeaddrinfo(res);
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    listen_fd_ = fd;
}

void Server::run() {
    if (listen_fd_ < 0) throw Error(ErrorKind::Io, "server is not bound");
    while (!stopping_.load()) {
        pollfd p{listen_fd_, POLLIN, 0};
        if (::poll(&p, 1, 100) <= 0) continue;
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        ++active_;
        std::thread([this, fd] {
            serve_connection(fd);
            ::close(fd);
            --active_;
        }).detach();
    }
}

void Server::stop() { stopping_.store(true); }

namespace {

bool send_all(int fd, const std::string& data) {
    std::size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n <= 0) return false;
        off += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

void Server::serve_connection(int fd) {
    Session session(corpus_, config_);
    std::string buf;
    bool overflow = false;
    char chunk[4096];
    while (!session.closed() && !stopping_.load()) {
        pollfd p{fd, POLLIN, 0};
        int pr = ::poll(&p, 1, 100);
        if (pr == 0) continue;
        if (pr < 0) break;
        ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n <= 0) break;
        buf.append(chunk, static_cast<std::size_t>(n));
        std::size_t start = 0;
        for (;;) {
            auto nl = buf.find('\n', start);
            if (nl == std::string::npos) break;
            std::string_view line(buf.data() + start, nl - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            std::string reply = overflow ? dump_message(error_message("BadMessage", "line too long"))
                                         : session.handle_line(line);
            overflow = false;
            if (!send_all(fd, reply + "\n")) return;
            start = nl + 1;
            if (session.closed()) return;
        }
        buf.erase(0, start);
        if (buf.size() > kMaxLineBytes) {
            // keep reading until the newline, then answer once
            overflow = true;
            buf.clear();
        }
    }
}

}  // namespace gvg
