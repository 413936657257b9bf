#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gvg/common.hpp"
#include "gvg/registry.hpp"

namespace gvg {

using ParamMap = std::map<std::string, ParamValue>;

/// One line of the SpriteSet. `params` holds only what the line itself declares;
/// inherited values are resolved through the parent chain.
struct SpriteDef {
    std::string id;
    std::optional<SpriteClass> declared_class;
    ParamMap params;
    int parent = -1;  // index into GameDescription::sprites, -1 for roots
    bool implicit = false;  // synthesised default for a reserved identifier
    SourceLoc loc;

    bool operator==(const SpriteDef& o) const {
        return id == o.id && declared_class == o.declared_class && params == o.params && parent == o.parent &&
               implicit == o.implicit;
    }
};

struct InteractionRule {
    std::string first;
    std::string second;  // may be "EOS"
    EffectClass effect = EffectClass::KillSprite;
    ParamMap params;
    SourceLoc loc;

    bool operator==(const InteractionRule& o) const {
        return first == o.first && second == o.second && effect == o.effect && params == o.params;
    }
};

struct TerminationRule {
    TerminationKind kind = TerminationKind::Timeout;
    ParamMap params;
    SourceLoc loc;

    bool operator==(const TerminationRule& o) const { return kind == o.kind && params == o.params; }
};

/// A parsed and validated VGDL program. Sprites are stored in pre-order, so every
/// subtree occupies a contiguous index range.
struct GameDescription {
    std::string name;
    std::vector<SpriteDef> sprites;
    std::vector<InteractionRule> interactions;
    std::vector<TerminationRule> terminations;
    std::map<char, std::vector<std::string>> level_mapping;

    bool operator==(const GameDescription&) const = default;

    int find_sprite(std::string_view id) const;
    /// Class declared on the sprite or inherited from its nearest ancestor.
    std::optional<SpriteClass> resolved_class(int index) const;
    /// Parameter value declared on the sprite or an ancestor, else the registry default.
    std::optional<ParamValue> resolved_param(int index, std::string_view key) const;
    /// One past the last descendant of `index` (pre-order subtree range).
    int subtree_end(int index) const;
    bool is_a(int index, int ancestor) const { return index >= ancestor && index < subtree_end(ancestor); }
};

inline constexpr std::string_view kEos = "EOS";
inline constexpr char kBlankCell = ' ';

struct CellPos {
    int x = 0;
    int y = 0;
    bool operator==(const CellPos&) const = default;
};

struct LevelGrid {
    int width = 0;
    int height = 0;
    std::vector<std::vector<std::string>> cells;  // row-major, width * height entries
    CellPos avatar_start;

    const std::vector<std::string>& at(int x, int y) const { return cells[static_cast<std::size_t>(y * width + x)]; }
    bool operator==(const LevelGrid&) const = default;
};

GameDescription parse_game(std::string_view text);
LevelGrid parse_level(std::string_view text, const GameDescription& desc);

/// Canonical text: four sections in fixed order, four-space indentation, parameters
/// sorted by key, defaults and inherited duplicates omitted.
std::string unparse(const GameDescription& desc);

/// Drops parameters equal to the value they would resolve to anyway and clears
/// source locations. Two descriptions are structurally equal when their
/// normalised forms compare equal.
GameDescription normalized(const GameDescription& desc);
bool structurally_equal(const GameDescription& a, const GameDescription& b);

}  // namespace gvg
