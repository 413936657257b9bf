#include "gvg/registry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <vector>

namespace gvg {

namespace {

constexpr std::array<std::string_view, kSpriteClassCount> kSpriteClassNames = {
    "Immovable", "Passive",   "Resource", "Flicker",      "Spawnpoint",
    "Portal",    "Missile",   "RandomNPC", "Chaser",      "Fleeing",
    "Bomber",    "MovingAvatar", "OrientedAvatar", "ShootAvatar", "FlakAvatar",
};

constexpr std::array<std::string_view, kEffectClassCount> kEffectNames = {
    "killSprite",     "killBoth",        "killIfFromAbove", "killIfOtherHasMore", "stepBack",
    "undoAll",        "transformTo",     "collectResource", "changeResource",     "reverseDirection",
    "bounceForward",  "pullWithIt",      "spawnBehind",     "teleportToExit",     "wrapAround",
};

constexpr std::array<std::string_view, 3> kTerminationNames = {"SpriteCounter", "MultiSpriteCounter", "Timeout"};

using P = ParamSpec;
using T = ParamType;

const P kColor{"color", T::Color};
const P kImg{"img", T::Text};
const P kSingleton{"singleton", T::Bool, false, ParamValue{false}};
const P kOrientation{"orientation", T::Orientation, false, ParamValue{std::string("UP")}};
const P kSpeed{"speed", T::PositiveReal, false, ParamValue{1.0}};
const P kCooldown{"cooldown", T::NonNegInt, false, ParamValue{std::int64_t{0}}};
const P kStypeReq{"stype", T::SpriteRef, true};
const P kStypeOpt{"stype", T::SpriteRef};
const P kProb{"prob", T::Probability, false, ParamValue{1.0}};
const P kTotal{"total", T::NonNegInt, false, ParamValue{std::int64_t{0}}};
const P kResValue{"value", T::PositiveInt, false, ParamValue{std::int64_t{1}}};
const P kResLimit{"limit", T::PositiveInt, false, ParamValue{std::int64_t{100}}};
const P kFlickerLimit{"limit", T::PositiveInt, false, ParamValue{std::int64_t{1}}};

const std::vector<P> kStaticParams{kColor, kImg, kSingleton, kOrientation};
const std::vector<P> kResourceParams{kColor, kImg, kSingleton, kOrientation, kResValue, kResLimit};
const std::vector<P> kFlickerParams{kColor, kImg, kSingleton, kOrientation, kFlickerLimit};
const std::vector<P> kSpawnpointParams{kColor, kImg, kSingleton, kOrientation, kStypeReq, kProb, kTotal, kCooldown};
const std::vector<P> kPortalParams{kColor, kImg, kSingleton, kOrientation, kStypeOpt};
const std::vector<P> kMoverParams{kColor, kImg, kSingleton, kOrientation, kSpeed};
const std::vector<P> kChaserParams{kColor, kImg, kSingleton, kOrientation, kSpeed, kStypeReq};
const std::vector<P> kBomberParams{kColor, kImg, kSingleton, kOrientation, kSpeed, kStypeReq, kProb, kTotal, kCooldown};
const std::vector<P> kAvatarParams{kColor, kImg, kSingleton, kOrientation};
const std::vector<P> kShooterParams{kColor, kImg, kSingleton, kOrientation, kStypeReq, kCooldown};
// Grouping parents may carry any key a descendant class understands; the
// concrete descendants are checked against their own class.
const std::vector<P> kCommonParams{kColor, kImg, kSingleton, kOrientation, kSpeed, kCooldown,
                                   kStypeOpt, kProb, kTotal, P{"value", T::PositiveInt},
                                   P{"limit", T::PositiveInt}};

const P kScore{"scoreChange", T::Int, false, ParamValue{std::int64_t{0}}};
const std::vector<P> kPlainEffect{kScore};
const std::vector<P> kKillIfOtherHasMore{kScore, P{"resource", T::ResourceRef, true},
                                         P{"limit", T::NonNegInt, false, ParamValue{std::int64_t{1}}}};
const std::vector<P> kStypeEffect{kScore, P{"stype", T::SpriteRef, true}};
const std::vector<P> kChangeResource{kScore, P{"resource", T::ResourceRef, true},
                                     P{"value", T::Int, false, ParamValue{std::int64_t{1}}},
                                     P{"killAtLimit", T::Bool, false, ParamValue{false}}};

const P kWin{"win", T::Bool, false, ParamValue{false}};
const P kBonus{"bonus", T::Int, false, ParamValue{std::int64_t{0}}};
const P kCountLimit{"limit", T::NonNegInt, false, ParamValue{std::int64_t{0}}};
const std::vector<P> kSpriteCounter{P{"stype", T::SpriteRef, true}, kCountLimit, kWin, kBonus};
const std::vector<P> kMultiSpriteCounter{P{"stype1", T::SpriteRef, true}, P{"stype2", T::SpriteRef},
                                         P{"stype3", T::SpriteRef}, P{"stype4", T::SpriteRef},
                                         kCountLimit, kWin, kBonus};
const std::vector<P> kTimeout{P{"limit", T::NonNegInt, true}, kWin, kBonus};
const std::vector<P> kGameParams{P{"name", T::Text}};

struct NamedColor {
    std::string_view name;
    Rgb rgb;
};

constexpr std::array<NamedColor, 18> kPalette = {{
    {"BLACK", {0, 0, 0}},        {"WHITE", {250, 250, 250}},  {"RED", {220, 30, 30}},
    {"GREEN", {30, 200, 60}},    {"BLUE", {40, 70, 230}},     {"YELLOW", {245, 225, 40}},
    {"ORANGE", {250, 150, 30}},  {"PURPLE", {150, 50, 200}},  {"BROWN", {130, 80, 40}},
    {"GRAY", {128, 128, 128}},   {"DARKGRAY", {70, 70, 70}},  {"LIGHTGRAY", {200, 200, 200}},
    {"PINK", {250, 130, 190}},   {"CYAN", {40, 220, 230}},    {"DARKBLUE", {20, 30, 120}},
    {"LIGHTBLUE", {140, 190, 250}}, {"GOLD", {210, 170, 20}}, {"DARKGREEN", {20, 100, 30}},
}};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<Enum>(it - names.begin());
}

}  // namespace

std::string_view to_string(SpriteClass c) { return kSpriteClassNames[static_cast<int>(c)]; }
std::string_view to_string(EffectClass e) { return kEffectNames[static_cast<int>(e)]; }
std::string_view to_string(TerminationKind k) { return kTerminationNames[static_cast<int>(k)]; }

std::optional<SpriteClass> parse_sprite_class(std::string_view name) {
    return lookup<SpriteClass>(kSpriteClassNames, name);
}
std::optional<EffectClass> parse_effect_class(std::string_view name) {
    return lookup<EffectClass>(kEffectNames, name);
}
std::optional<TerminationKind> parse_termination_kind(std::string_view name) {
    return lookup<TerminationKind>(kTerminationNames, name);
}

bool is_avatar(SpriteClass c) {
    return c == SpriteClass::MovingAvatar || c == SpriteClass::OrientedAvatar || c == SpriteClass::ShootAvatar ||
           c == SpriteClass::FlakAvatar;
}

bool is_spawner(SpriteClass c) { return c == SpriteClass::Spawnpoint || c == SpriteClass::Bomber; }

std::span<const ParamSpec> sprite_params(SpriteClass c) {
    switch (c) {
        case SpriteClass::Immovable:
        case SpriteClass::Passive: return kStaticParams;
        case SpriteClass::Resource: return kResourceParams;
        case SpriteClass::Flicker: return kFlickerParams;
        case SpriteClass::Spawnpoint: return kSpawnpointParams;
        case SpriteClass::Portal: return kPortalParams;
        case SpriteClass::Missile:
        case SpriteClass::RandomNPC: return kMoverParams;
        case SpriteClass::Chaser:
        case SpriteClass::Fleeing: return kChaserParams;
        case SpriteClass::Bomber: return kBomberParams;
        case SpriteClass::MovingAvatar:
        case SpriteClass::OrientedAvatar: return kAvatarParams;
        case SpriteClass::ShootAvatar:
        case SpriteClass::FlakAvatar: return kShooterParams;
    }
    return {};
}

std::span<const ParamSpec> common_sprite_params() { return kCommonParams; }

std::span<const ParamSpec> effect_params(EffectClass e) {
    switch (e) {
        case EffectClass::KillIfOtherHasMore: return kKillIfOtherHasMore;
        case EffectClass::TransformTo:
        case EffectClass::SpawnBehind: return kStypeEffect;
        case EffectClass::ChangeResource: return kChangeResource;
        default: return kPlainEffect;
    }
}

std::span<const ParamSpec> termination_params(TerminationKind k) {
    switch (k) {
        case TerminationKind::SpriteCounter: return kSpriteCounter;
        case TerminationKind::MultiSpriteCounter: return kMultiSpriteCounter;
        case TerminationKind::Timeout: return kTimeout;
    }
    return {};
}

std::span<const ParamSpec> game_params() { return kGameParams; }

const ParamSpec* find_param(std::span<const ParamSpec> specs, std::string_view key) {
    for (const auto& s : specs) {
        if (s.key == key) return &s;
    }
    return nullptr;
}

std::optional<Rgb> parse_color(std::string_view name) {
    for (const auto& c : kPalette) {
        if (c.name == name) return c.rgb;
    }
    return std::nullopt;
}

Rgb default_color(SpriteClass c) {
    switch (c) {
        case SpriteClass::Immovable: return {90, 90, 90};
        case SpriteClass::Passive: return {160, 110, 60};
        case SpriteClass::Resource: return {230, 200, 40};
        case SpriteClass::Flicker: return {255, 255, 160};
        case SpriteClass::Spawnpoint: return {110, 40, 140};
        case SpriteClass::Portal: return {60, 40, 160};
        case SpriteClass::Missile: return {240, 90, 40};
        case SpriteClass::RandomNPC: return {200, 60, 90};
        case SpriteClass::Chaser: return {230, 40, 40};
        case SpriteClass::Fleeing: return {90, 200, 200};
        case SpriteClass::Bomber: return {240, 130, 30};
        case SpriteClass::MovingAvatar:
        case SpriteClass::OrientedAvatar:
        case SpriteClass::ShootAvatar:
        case SpriteClass::FlakAvatar: return {40, 210, 80};
    }
    return {255, 255, 255};
}

std::string format_param(const ParamValue& v) {
    struct Visitor {
        std::string operator()(bool b) const { return b ? "True" : "False"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const {
            char buf[64];
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
            std::string s(buf, end);
            // keep reals recognisable as reals after a round trip
            if (s.find_first_of(".e") == std::string::npos && std::isfinite(d)) s += ".0";
            return s;
        }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, v);
}

}  // namespace gvg
