#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gvg/common.hpp"
#include "gvg/registry.hpp"
#include "gvg/rng.hpp"
#include "gvg/vgdl.hpp"

namespace gvg {

inline constexpr int kMaxResources = 8;
inline constexpr std::int64_t kDefaultTimeout = 2000;

/// A sprite type with every parameter resolved through the taxonomy.
struct CompiledType {
    std::string id;
    std::optional<SpriteClass> cls;  // empty for grouping-only parents
    int parent = -1;
    int subtree_end = 0;
    int move_period = 1;  // ticks between steps, max(1, round(1/speed))
    Orientation orientation = Orientation::Up;
    int stype = -1;
    double prob = 1.0;
    int total = 0;
    int cooldown = 0;
    int limit = 1;
    int value = 1;
    bool singleton = false;
    int resource_slot = -1;
    Rgb color;
};

struct CompiledRule {
    EffectClass effect = EffectClass::KillSprite;
    int first = -1;
    int second = -1;  // -1 means EOS
    int score = 0;
    int stype = -1;
    int resource_slot = -1;
    int value = 1;
    int limit = 1;
    bool kill_at_limit = false;
};

struct CompiledTermination {
    TerminationKind kind = TerminationKind::Timeout;
    std::vector<int> stypes;
    std::int64_t limit = 0;
    bool win = false;
    std::int64_t bonus = 0;
};

struct PairRule {
    int rule = 0;
    bool swapped = false;  // the later sprite of the pair plays `first`
};

/// Immutable, shareable form of a GameDescription used by every state of the game.
struct CompiledGame {
    GameDescription desc;
    std::vector<CompiledType> types;  // same order as desc.sprites (pre-order)
    std::vector<CompiledRule> rules;
    std::vector<CompiledTermination> terminations;  // includes the implicit Timeout when none is declared
    std::vector<int> resource_types;  // slot -> type
    std::vector<std::uint32_t> pair_start;  // CSR over type pairs, size T*T+1
    std::vector<PairRule> pair_rules;
    std::vector<std::vector<int>> eos_rules;  // per type

    int type_count() const { return static_cast<int>(types.size()); }
    int find_type(std::string_view id) const;
    bool is_a(int type, int ancestor) const {
        return type >= ancestor && type < types[static_cast<std::size_t>(ancestor)].subtree_end;
    }
    std::span<const PairRule> rules_for(int a, int b) const {
        std::size_t k = static_cast<std::size_t>(a) * types.size() + static_cast<std::size_t>(b);
        return {pair_rules.data() + pair_start[k], pair_rules.data() + pair_start[k + 1]};
    }
};

std::shared_ptr<const CompiledGame> compile(const GameDescription& desc);

struct Sprite {
    std::uint32_t uid = 0;
    std::int16_t type = 0;
    std::int16_t x = 0;
    std::int16_t y = 0;
    std::int16_t start_x = 0;  // position at the start of the current tick (transient)
    std::int16_t start_y = 0;
    Orientation orientation = Orientation::Up;
    bool alive = true;
    std::int32_t move_timer = 0;
    std::int32_t spawn_timer = 0;
    std::int32_t age = 0;
    std::int32_t spawned = 0;
    std::array<std::int32_t, kMaxResources> resources{};
};

struct ActionSpace {
    std::array<Action, 6> items{};
    std::uint8_t size = 0;

    std::span<const Action> view() const { return {items.data(), size}; }
    bool contains(Action a) const;
    int index_of(Action a) const;
    Action operator[](std::size_t i) const { return items[i]; }
    bool operator==(const ActionSpace& o) const { return view().size() == o.view().size() && std::equal(view().begin(), view().end(), o.view().begin()); }
};

ActionSpace action_space_for(SpriteClass avatar_class);

/// Full simulation state. Copying it is a deep, independent clone.
struct GameState {
    std::shared_ptr<const CompiledGame> game;
    int width = 0;
    int height = 0;
    std::int64_t tick = 0;
    std::int64_t score = 0;
    Status status = Status::Running;
    Rng rng;
    std::uint32_t next_uid = 0;
    ActionSpace actions;
    std::vector<Sprite> sprites;  // alive sprites in creation order
    std::vector<std::uint32_t> cell_start;  // CSR cell index, size width*height+1
    std::vector<std::uint32_t> cell_items;  // sprite indices, ascending within a cell

    std::span<const std::uint32_t> at(int x, int y) const {
        std::size_t c = static_cast<std::size_t>(y * width + x);
        return {cell_items.data() + cell_start[c], cell_items.data() + cell_start[c + 1]};
    }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    /// Index of the living avatar, or -1.
    int avatar_index() const;
    /// Number of living sprites of `type` or any of its descendants.
    int count(int type) const;
    void rebuild_index();
};

struct Event {
    EffectClass effect = EffectClass::KillSprite;
    int first_type = -1;
    int second_type = -1;  // -1 for EOS
    int x = 0;
    int y = 0;
    int score = 0;
    bool operator==(const Event&) const = default;
};

struct StepResult {
    std::int64_t reward = 0;  // score(t) - score(t-1), bonus included
    std::int64_t bonus = 0;   // termination bonus applied this tick
    std::vector<Event> events;
    Status status = Status::Running;
};

GameState init_state(std::shared_ptr<const CompiledGame> game, const LevelGrid& level, std::uint64_t seed);
GameState init_state(const GameDescription& desc, const LevelGrid& level, std::uint64_t seed);

/// One tick. Throws GameOver when the episode has ended, IllegalAction when the
/// action is outside the state's action space.
StepResult advance(GameState& state, Action action);

inline GameState clone_state(const GameState& state) { return state; }

struct TerminationOutcome {
    Status status = Status::Running;
    std::int64_t bonus = 0;
};

/// First termination rule that holds, without changing the state.
std::optional<TerminationOutcome> evaluate_termination(const GameState& state);
/// Applies the first holding termination (status and bonus) and returns the status.
Status check_termination(GameState& state);

std::vector<std::uint8_t> serialize_state(const GameState& state);
GameState deserialize_state(std::shared_ptr<const CompiledGame> game, std::span<const std::uint8_t> bytes);
std::uint64_t state_hash(const GameState& state);

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL);

inline constexpr std::string_view kEngineVersion = "gvg-engine 1.0";

}  // namespace gvg
