#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "gvg/games.hpp"

namespace gvg {

/// Source of key presses for human play.
class KeySource {
public:
    virtual ~KeySource() = default;
    /// A key pressed within `timeout_ms`, or nullopt.
    virtual std::optional<char> next_key(int timeout_ms) = 0;
};

/// Raw-mode stdin. Throws Io when stdin is not a terminal.
class TerminalKeys : public KeySource {
public:
    TerminalKeys();
    ~TerminalKeys() override;
    std::optional<char> next_key(int timeout_ms) override;

private:
    struct Saved;
    Saved* saved_ = nullptr;
};

/// Replays a fixed string; '.' means no key for that tick. Ends with 'q'.
class ScriptedKeys : public KeySource {
public:
    explicit ScriptedKeys(std::string keys) : keys_(std::move(keys)) {}
    std::optional<char> next_key(int) override;

private:
    std::string keys_;
    std::size_t pos_ = 0;
};

/// w/a/s/d move, space uses, q quits; anything else is NIL.
std::optional<Action> key_action(char key);

/// One character per cell: the level-mapping character of the topmost sprite.
std::string render_text(const GameState& state);

struct PlayResult {
    std::int64_t score = 0;
    Status status = Status::Running;
    std::int64_t ticks = 0;
};

PlayResult play_human(const LoadedGame& game, std::size_t level, std::uint64_t seed, KeySource& keys, std::ostream& out,
                      int tick_ms = 150);

}  // namespace gvg
