#include "gvg/common.hpp"

namespace gvg {

std::string_view to_string(Action a) {
    switch (a) {
        case Action::Up: return "UP";
        case Action::Down: return "DOWN";
        case Action::Left: return "LEFT";
        case Action::Right: return "RIGHT";
        case Action::Use: return "USE";
        case Action::Nil: return "NIL";
    }
    return "?";
}

std::string_view to_string(Orientation o) {
    switch (o) {
        case Orientation::Up: return "UP";
        case Orientation::Down: return "DOWN";
        case Orientation::Left: return "LEFT";
        case Orientation::Right: return "RIGHT";
    }
    return "?";
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Running: return "RUNNING";
        case Status::Win: return "WIN";
        case Status::Lose: return "LOSE";
        case Status::Aborted: return "ABORTED";
    }
    return "?";
}

std::optional<Action> parse_action(std::string_view name) {
    for (Action a : kAllActions) {
        if (to_string(a) == name) return a;
    }
    return std::nullopt;
}

std::optional<Orientation> parse_orientation(std::string_view name) {
    for (Orientation o : {Orientation::Up, Orientation::Down, Orientation::Left, Orientation::Right}) {
        if (to_string(o) == name) return o;
    }
    return std::nullopt;
}

std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownClass: return "UnknownClass";
        case ErrorKind::UnknownParameter: return "UnknownParameter";
        case ErrorKind::UnresolvedReference: return "UnresolvedReference";
        case ErrorKind::DuplicateSpriteId: return "DuplicateSpriteId";
        case ErrorKind::InvalidValue: return "InvalidValue";
        case ErrorKind::RaggedGrid: return "RaggedGrid";
        case ErrorKind::UnmappedCharacter: return "UnmappedCharacter";
        case ErrorKind::MissingAvatar: return "MissingAvatar";
        case ErrorKind::IncompatibleLevel: return "IncompatibleLevel";
        case ErrorKind::UnknownGame: return "UnknownGame";
        case ErrorKind::BadLevel: return "BadLevel";
        case ErrorKind::GameOver: return "GameOver";
        case ErrorKind::IllegalAction: return "IllegalAction";
        case ErrorKind::Io: return "Io";
    }
    return "?";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message, SourceLoc loc) {
    std::string out(to_string(kind));
    if (loc.line > 0) {
        out += " at " + std::to_string(loc.line) + ":" + std::to_string(loc.column);
    }
    out += ": " + message;
    return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, SourceLoc loc)
    : std::runtime_error(format_message(kind, message, loc)), kind_(kind), loc_(loc), detail_(std::move(message)) {}

}  // namespace gvg
