#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gvg {

/// Agent move set. Games expose an ordered subset of these.
enum class Action : std::uint8_t { Up, Down, Left, Right, Use, Nil };

inline constexpr std::array<Action, 6> kAllActions = {Action::Up,  Action::Down, Action::Left,
                                                      Action::Right, Action::Use, Action::Nil};

enum class Orientation : std::uint8_t { Up, Down, Left, Right };

enum class Status : std::uint8_t { Running, Win, Lose, Aborted };

std::string_view to_string(Action a);
std::string_view to_string(Orientation o);
std::string_view to_string(Status s);
std::optional<Action> parse_action(std::string_view name);
std::optional<Orientation> parse_orientation(std::string_view name);

struct Offset {
    int dx = 0;
    int dy = 0;
};

constexpr Offset offset_of(Orientation o) {
    switch (o) {
        case Orientation::Up: return {0, -1};
        case Orientation::Down: return {0, 1};
        case Orientation::Left: return {-1, 0};
        case Orientation::Right: return {1, 0};
    }
    return {};
}

constexpr Orientation reversed(Orientation o) {
    switch (o) {
        case Orientation::Up: return Orientation::Down;
        case Orientation::Down: return Orientation::Up;
        case Orientation::Left: return Orientation::Right;
        case Orientation::Right: return Orientation::Left;
    }
    return o;
}

enum class ErrorKind {
    SyntaxError,
    UnknownClass,
    UnknownParameter,
    UnresolvedReference,
    DuplicateSpriteId,
    InvalidValue,
    RaggedGrid,
    UnmappedCharacter,
    MissingAvatar,
    IncompatibleLevel,
    UnknownGame,
    BadLevel,
    GameOver,
    IllegalAction,
    Io,
};

std::string_view to_string(ErrorKind k);

struct SourceLoc {
    int line = 0;    // 1-based; 0 when not applicable
    int column = 0;  // 1-based
};

/// Every failure raised by the library. Parse failures carry a source location.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, SourceLoc loc = {});

    ErrorKind kind() const noexcept { return kind_; }
    const SourceLoc& loc() const noexcept { return loc_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    SourceLoc loc_;
    std::string detail_;
};

}  // namespace gvg
