#include "gvg/play.hpp"

#include <poll.h>
#include <termios.h>
#include <unistd.h>

#include <cctype>

namespace gvg {

struct TerminalKeys::Saved {
    termios tio;
};

TerminalKeys::TerminalKeys() {
    if (!::isatty(STDIN_FILENO)) throw Error(ErrorKind::Io, "play needs an interactive terminal on stdin");
    saved_ = new Saved;
    ::tcgetattr(STDIN_FILENO, &saved_->tio);
    termios raw = saved_->tio;
    raw.c_lflag &= static_cast<tcflag_t>(~(ICANON | ECHO));
    raw.c_cc[VMIN] = 0;
    raw.c_cc[VTIME] = 0;
    ::tcsetattr(STDIN_FILENO, TCSANOW, &raw);
}

TerminalKeys::~TerminalKeys() {
    if (saved_) ::tcsetattr(STDIN_FILENO, TCSANOW, &saved_->tio);
    delete saved_;
}

std::optional<char> TerminalKeys::next_key(int timeout_ms) {
    pollfd p{STDIN_FILENO, POLLIN, 0};
    if (::poll(&p, 1, timeout_ms) <= 0) return std::nullopt;
    char c = 0;
    if (::read(STDIN_FILENO, &c, 1) != 1) return std::nullopt;
    // drain the rest so held keys do not queue up
    char junk[64];
    while (::poll(&p, 1, 0) > 0 && ::read(STDIN_FILENO, junk, sizeof junk) > 0) {
    }
    return c;
}

std::optional<char> ScriptedKeys::next_key(int) {
    if (pos_ >= keys_.size()) return 'q';
    char c = keys_[pos_++];
    if (c == '.') return std::nullopt;
    return c;
}

std::optional<Action> key_action(char key) {
    switch (std::tolower(static_cast<unsigned char>(key))) {
        case 'w': return Action::Up;
        case 's': return Action::Down;
        case 'a': return Action::Left;
        case 'd': return Action::Right;
        case ' ': return Action::Use;
        default: return std::nullopt;
    }
}

std::string render_text(const GameState& state) {
    const auto& game = *state.game;
    std::vector<char> glyph(game.types.size(), '?');
    for (std::size_t t = 0; t < game.types.size(); ++t) {
        if (!game.types[t].id.empty()) glyph[t] = game.types[t].id[0];
    }
    for (const auto& [ch, ids] : game.desc.level_mapping) {
        if (ids.empty()) continue;
        int t = game.find_type(ids.back());
        if (t >= 0) glyph[static_cast<std::size_t>(t)] = ch;
    }
    std::string out;
    out.reserve(static_cast<std::size_t>((state.width + 1) * state.height));
    for (int y = 0; y < state.height; ++y) {
        for (int x = 0; x < state.width; ++x) {
            int top = -1;
            for (auto i : state.at(x, y)) top = std::max<int>(top, state.sprites[i].type);
            out += top < 0 ? ' ' : glyph[static_cast<std::size_t>(top)];
        }
        out += '\n';
    }
    return out;
}

PlayResult play_human(const LoadedGame& game, std::size_t level, std::uint64_t seed, KeySource& keys, std::ostream& out,
                      int tick_ms) {
    GameState s = game.start(level, seed);
    auto show = [&] {
        out << "\x1b[H\x1b[2J" << render_text(s) << "tick " << s.tick << "  score " << s.score << "  [wasd move, space use, q quit]\n";
        out.flush();
    };
    show();
    while (s.status == Status::Running) {
        auto key = keys.next_key(tick_ms);
        if (key && (*key == 'q' || *key == 'Q')) {
            s.status = Status::Aborted;
            break;
        }
        Action a = Action::Nil;
        if (key) {
            if (auto mapped = key_action(*key); mapped && s.actions.contains(*mapped)) a = *mapped;
        }
        if (!s.actions.contains(a)) a = s.actions[0];
        advance(s, a);
        show();
    }
    out << "final: " << to_string(s.status) << " score " << s.score << " after " << s.tick << " ticks\n";
    return {s.score, s.status, s.tick};
}

}  // namespace gvg
