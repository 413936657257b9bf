#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace gvg {

/// Closed set of sprite behaviours understood by the engine.
enum class SpriteClass : std::uint8_t {
    Immovable,
    Passive,
    Resource,
    Flicker,
    Spawnpoint,
    Portal,
    Missile,
    RandomNPC,
    Chaser,
    Fleeing,
    Bomber,
    MovingAvatar,
    OrientedAvatar,
    ShootAvatar,
    FlakAvatar,
};

/// Closed set of interaction effects.
enum class EffectClass : std::uint8_t {
    KillSprite,
    KillBoth,
    KillIfFromAbove,
    KillIfOtherHasMore,
    StepBack,
    UndoAll,
    TransformTo,
    CollectResource,
    ChangeResource,
    ReverseDirection,
    BounceForward,
    PullWithIt,
    SpawnBehind,
    TeleportToExit,
    WrapAround,
};

enum class TerminationKind : std::uint8_t { SpriteCounter, MultiSpriteCounter, Timeout };

inline constexpr int kSpriteClassCount = 15;
inline constexpr int kEffectClassCount = 15;

std::string_view to_string(SpriteClass c);
std::string_view to_string(EffectClass e);
std::string_view to_string(TerminationKind k);
std::optional<SpriteClass> parse_sprite_class(std::string_view name);
std::optional<EffectClass> parse_effect_class(std::string_view name);
std::optional<TerminationKind> parse_termination_kind(std::string_view name);

bool is_avatar(SpriteClass c);
bool is_spawner(SpriteClass c);

/// Typed parameter value. Which alternative is held is fixed by the key's ParamType.
using ParamValue = std::variant<bool, std::int64_t, double, std::string>;

enum class ParamType : std::uint8_t {
    Bool,
    Int,          // any integer
    NonNegInt,    // >= 0
    PositiveInt,  // >= 1
    PositiveReal, // > 0
    Probability,  // [0, 1]
    SpriteRef,
    ResourceRef,  // sprite ref whose class is Resource
    Color,
    Orientation,
    Text,
};

struct ParamSpec {
    std::string_view key;
    ParamType type;
    bool required = false;
    std::optional<ParamValue> fallback;  // registry default when not required
};

std::span<const ParamSpec> sprite_params(SpriteClass c);
/// Parameters accepted on a sprite that declares no class (grouping parents).
std::span<const ParamSpec> common_sprite_params();
std::span<const ParamSpec> effect_params(EffectClass e);
std::span<const ParamSpec> termination_params(TerminationKind k);
std::span<const ParamSpec> game_params();

const ParamSpec* find_param(std::span<const ParamSpec> specs, std::string_view key);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

std::optional<Rgb> parse_color(std::string_view name);
/// Colour used for a sprite class when the definition names none.
Rgb default_color(SpriteClass c);
inline constexpr Rgb kBackground{0, 0, 0};

/// Formats a value the way the VGDL text format writes it.
std::string format_param(const ParamValue& v);

}  // namespace gvg
