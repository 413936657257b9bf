#include "gvg/engine.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace gvg {

namespace {

int as_int(const std::optional<ParamValue>& v, int fallback) {
    if (!v) return fallback;
    if (auto p = std::get_if<std::int64_t>(&*v)) return static_cast<int>(*p);
    return fallback;
}

double as_real(const std::optional<ParamValue>& v, double fallback) {
    if (!v) return fallback;
    if (auto p = std::get_if<double>(&*v)) return *p;
    if (auto p = std::get_if<std::int64_t>(&*v)) return static_cast<double>(*p);
    return fallback;
}

bool as_bool(const std::optional<ParamValue>& v, bool fallback) {
    if (!v) return fallback;
    if (auto p = std::get_if<bool>(&*v)) return *p;
    return fallback;
}

std::optional<std::string> as_text(const std::optional<ParamValue>& v) {
    if (!v) return std::nullopt;
    if (auto p = std::get_if<std::string>(&*v)) return *p;
    return std::nullopt;
}

std::optional<ParamValue> rule_param(const ParamMap& params, std::span<const ParamSpec> specs, std::string_view key) {
    if (auto it = params.find(std::string(key)); it != params.end()) return it->second;
    if (const auto* spec = find_param(specs, key); spec && spec->fallback) return spec->fallback;
    return std::nullopt;
}

int sign(int v) { return (v > 0) - (v < 0); }

}  // namespace

int CompiledGame::find_type(std::string_view id) const {
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (types[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

std::shared_ptr<const CompiledGame> compile(const GameDescription& desc) {
    auto g = std::make_shared<CompiledGame>();
    g->desc = desc;
    const int n = static_cast<int>(desc.sprites.size());
    if (n > std::numeric_limits<std::int16_t>::max()) throw Error(ErrorKind::InvalidValue, "too many sprite types");

    auto type_of = [&](const std::optional<std::string>& id) { return id ? desc.find_sprite(*id) : -1; };

    for (int i = 0; i < n; ++i) {
        const auto& def = desc.sprites[static_cast<std::size_t>(i)];
        CompiledType t;
        t.id = def.id;
        t.cls = desc.resolved_class(i);
        t.parent = def.parent;
        t.subtree_end = desc.subtree_end(i);
        double speed = as_real(desc.resolved_param(i, "speed"), 1.0);
        t.move_period = std::max(1, static_cast<int>(std::lround(1.0 / speed)));
        t.orientation = parse_orientation(as_text(desc.resolved_param(i, "orientation")).value_or("UP")).value_or(Orientation::Up);
        t.stype = type_of(as_text(desc.resolved_param(i, "stype")));
        t.prob = as_real(desc.resolved_param(i, "prob"), 1.0);
        t.total = as_int(desc.resolved_param(i, "total"), 0);
        t.cooldown = as_int(desc.resolved_param(i, "cooldown"), 0);
        t.limit = as_int(desc.resolved_param(i, "limit"), 1);
        t.value = as_int(desc.resolved_param(i, "value"), 1);
        t.singleton = as_bool(desc.resolved_param(i, "singleton"), false);
        auto color = as_text(desc.resolved_param(i, "color"));
        if (color && parse_color(*color)) {
            t.color = *parse_color(*color);
        } else {
            t.color = t.cls ? default_color(*t.cls) : Rgb{128, 128, 128};
        }
        if (t.cls == SpriteClass::Resource) {
            t.resource_slot = static_cast<int>(g->resource_types.size());
            g->resource_types.push_back(i);
        }
        g->types.push_back(std::move(t));
    }

    for (const auto& r : desc.interactions) {
        CompiledRule c;
        auto specs = effect_params(r.effect);
        c.effect = r.effect;
        c.first = desc.find_sprite(r.first);
        c.second = r.second == kEos ? -1 : desc.find_sprite(r.second);
        c.score = as_int(rule_param(r.params, specs, "scoreChange"), 0);
        c.stype = type_of(as_text(rule_param(r.params, specs, "stype")));
        int res = type_of(as_text(rule_param(r.params, specs, "resource")));
        if (res >= 0) c.resource_slot = g->types[static_cast<std::size_t>(res)].resource_slot;
        c.value = as_int(rule_param(r.params, specs, "value"), 1);
        c.limit = as_int(rule_param(r.params, specs, "limit"), 1);
        c.kill_at_limit = as_bool(rule_param(r.params, specs, "killAtLimit"), false);
        g->rules.push_back(c);
    }

    bool has_timeout = false;
    for (const auto& t : desc.terminations) {
        CompiledTermination c;
        auto specs = termination_params(t.kind);
        c.kind = t.kind;
        for (const char* key : {"stype", "stype1", "stype2", "stype3", "stype4"}) {
            int ty = type_of(as_text(rule_param(t.params, specs, key)));
            if (ty >= 0) c.stypes.push_back(ty);
        }
        auto limit = rule_param(t.params, specs, "limit");
        c.limit = limit ? std::get<std::int64_t>(*limit) : 0;
        c.win = as_bool(rule_param(t.params, specs, "win"), false);
        auto bonus = rule_param(t.params, specs, "bonus");
        c.bonus = bonus ? std::get<std::int64_t>(*bonus) : 0;
        has_timeout = has_timeout || t.kind == TerminationKind::Timeout;
        g->terminations.push_back(std::move(c));
    }
    if (!has_timeout) {
        CompiledTermination c;
        c.kind = TerminationKind::Timeout;
        c.limit = kDefaultTimeout;
        g->terminations.push_back(std::move(c));
    }

    const auto T = static_cast<std::size_t>(n);
    g->pair_start.assign(T * T + 1, 0);
    for (std::size_t a = 0; a < T; ++a) {
        for (std::size_t b = 0; b < T; ++b) {
            g->pair_start[a * T + b] = static_cast<std::uint32_t>(g->pair_rules.size());
            for (std::size_t r = 0; r < g->rules.size(); ++r) {
                const auto& rule = g->rules[r];
                if (rule.second < 0) continue;
                if (g->is_a(static_cast<int>(a), rule.first) && g->is_a(static_cast<int>(b), rule.second)) {
                    g->pair_rules.push_back({static_cast<int>(r), false});
                }
                if (g->is_a(static_cast<int>(b), rule.first) && g->is_a(static_cast<int>(a), rule.second)) {
                    g->pair_rules.push_back({static_cast<int>(r), true});
                }
            }
        }
    }
    g->pair_start[T * T] = static_cast<std::uint32_t>(g->pair_rules.size());
    g->eos_rules.resize(T);
    for (std::size_t a = 0; a < T; ++a) {
        for (std::size_t r = 0; r < g->rules.size(); ++r) {
            if (g->rules[r].second < 0 && g->is_a(static_cast<int>(a), g->rules[r].first)) {
                g->eos_rules[a].push_back(static_cast<int>(r));
            }
        }
    }
    return g;
}

bool ActionSpace::contains(Action a) const { return index_of(a) >= 0; }

int ActionSpace::index_of(Action a) const {
    for (std::size_t i = 0; i < size; ++i) {
        if (items[i] == a) return static_cast<int>(i);
    }
    return -1;
}

ActionSpace action_space_for(SpriteClass avatar_class) {
    ActionSpace s;
    auto add = [&](std::initializer_list<Action> list) {
        for (Action a : list) s.items[s.size++] = a;
    };
    switch (avatar_class) {
        case SpriteClass::ShootAvatar:
            add({Action::Up, Action::Down, Action::Left, Action::Right, Action::Use, Action::Nil});
            break;
        case SpriteClass::FlakAvatar: add({Action::Left, Action::Right, Action::Use, Action::Nil}); break;
        default: add({Action::Up, Action::Down, Action::Left, Action::Right, Action::Nil}); break;
    }
    return s;
}

int GameState::avatar_index() const {
    for (std::size_t i = 0; i < sprites.size(); ++i) {
        const auto& s = sprites[i];
        const auto& cls = game->types[static_cast<std::size_t>(s.type)].cls;
        if (s.alive && cls && is_avatar(*cls)) return static_cast<int>(i);
    }
    return -1;
}

int GameState::count(int type) const {
    int n = 0;
    for (const auto& s : sprites) n += s.alive && game->is_a(s.type, type);
    return n;
}

void GameState::rebuild_index() {
    const std::size_t cells = static_cast<std::size_t>(width * height);
    cell_start.assign(cells + 1, 0);
    for (const auto& s : sprites) {
        if (s.alive) ++cell_start[static_cast<std::size_t>(s.y * width + s.x) + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) cell_start[c + 1] += cell_start[c];
    cell_items.resize(cell_start[cells]);
    thread_local std::vector<std::uint32_t> fill;
    fill.assign(cell_start.begin(), cell_start.end() - 1);
    for (std::size_t i = 0; i < sprites.size(); ++i) {
        const auto& s = sprites[i];
        if (s.alive) cell_items[fill[static_cast<std::size_t>(s.y * width + s.x)]++] = static_cast<std::uint32_t>(i);
    }
}

namespace {

/// Mutable scratch for one advance call. Kept per thread to avoid reallocating every tick.
struct TickScratch {
    std::vector<int> eos;  // sprite indices that tried to leave the grid, in order
    struct Pending {
        int rule;
        int first;
        int second;
        int dx;
        int dy;
    };
    std::vector<Pending> pending;
    std::vector<std::uint32_t> items;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> evaluated;  // uid pairs seen this tick
    std::vector<std::uint8_t> displaced;
    std::vector<std::uint8_t> next_displaced;
    std::vector<int> candidates;
};

TickScratch& scratch() {
    thread_local TickScratch s;
    return s;
}

class Ticker {
public:
    Ticker(GameState& s, StepResult& out) : s_(s), g_(*s.game), out_(out), tmp_(scratch()) {}

    void run(Action action) {
        for (auto& sp : s_.sprites) {
            sp.start_x = sp.x;
            sp.start_y = sp.y;
        }
        tmp_.eos.clear();
        tmp_.evaluated.clear();
        const std::size_t n0 = s_.sprites.size();

        avatar_act(action);
        for (std::size_t i = 0; i < n0; ++i) npc_update(static_cast<int>(i));
        for (std::size_t i = 0; i < n0; ++i) spawner_update(static_cast<int>(i));

        collide();

        compact();
        s_.rebuild_index();
        ++s_.tick;
    }

private:
    Sprite& sp(int i) { return s_.sprites[static_cast<std::size_t>(i)]; }
    const CompiledType& type_of(int i) { return g_.types[static_cast<std::size_t>(sp(i).type)]; }

    void step(int i, Orientation o) {
        Offset d = offset_of(o);
        int nx = sp(i).x + d.dx;
        int ny = sp(i).y + d.dy;
        if (!s_.in_bounds(nx, ny)) {
            tmp_.eos.push_back(i);
            return;
        }
        sp(i).x = static_cast<std::int16_t>(nx);
        sp(i).y = static_cast<std::int16_t>(ny);
    }

    bool singleton_blocked(int type) {
        if (!g_.types[static_cast<std::size_t>(type)].singleton) return false;
        for (const auto& o : s_.sprites) {
            if (o.alive && g_.is_a(o.type, type)) return true;
        }
        return false;
    }

    int spawn(int type, int x, int y, Orientation o) {
        if (singleton_blocked(type)) return -1;
        Sprite n;
        n.uid = s_.next_uid++;
        n.type = static_cast<std::int16_t>(type);
        n.x = n.start_x = static_cast<std::int16_t>(x);
        n.y = n.start_y = static_cast<std::int16_t>(y);
        n.orientation = o;
        s_.sprites.push_back(n);
        return static_cast<int>(s_.sprites.size()) - 1;
    }

    void avatar_act(Action action) {
        int a = s_.avatar_index();
        if (a < 0) return;
        const auto& t = type_of(a);
        if (sp(a).spawn_timer > 0) --sp(a).spawn_timer;
        switch (action) {
            case Action::Up:
            case Action::Down:
            case Action::Left:
            case Action::Right: {
                auto o = static_cast<Orientation>(static_cast<int>(action));
                sp(a).orientation = o;
                step(a, o);
                break;
            }
            case Action::Use: {
                if (t.stype < 0 || sp(a).spawn_timer > 0) break;
                Orientation o = Orientation::Up;
                int x = sp(a).x;
                int y = sp(a).y;
                if (t.cls == SpriteClass::ShootAvatar) {
                    o = sp(a).orientation;
                    Offset d = offset_of(o);
                    x += d.dx;
                    y += d.dy;
                    if (!s_.in_bounds(x, y)) break;
                }
                if (spawn(t.stype, x, y, o) >= 0) sp(a).spawn_timer = t.cooldown;
                break;
            }
            case Action::Nil: break;
        }
    }

    void npc_update(int i) {
        if (!sp(i).alive) return;
        const auto& t = type_of(i);
        if (!t.cls) return;
        switch (*t.cls) {
            case SpriteClass::Flicker:
                if (++sp(i).age >= t.limit) sp(i).alive = false;
                return;
            case SpriteClass::Missile:
            case SpriteClass::Bomber:
            case SpriteClass::RandomNPC:
            case SpriteClass::Chaser:
            case SpriteClass::Fleeing: break;
            default: return;
        }
        if (++sp(i).move_timer < t.move_period) return;
        sp(i).move_timer = 0;
        switch (*t.cls) {
            case SpriteClass::Missile:
            case SpriteClass::Bomber: step(i, sp(i).orientation); break;
            case SpriteClass::RandomNPC: {
                auto o = static_cast<Orientation>(s_.rng.uniform(4));
                sp(i).orientation = o;
                step(i, o);
                break;
            }
            case SpriteClass::Chaser:
            case SpriteClass::Fleeing: chase(i, t, *t.cls == SpriteClass::Chaser); break;
            default: break;
        }
    }

    void chase(int i, const CompiledType& t, bool towards) {
        if (t.stype < 0) return;
        int best = -1;
        int best_d = std::numeric_limits<int>::max();
        for (std::size_t k = 0; k < s_.sprites.size(); ++k) {
            const auto& o = s_.sprites[k];
            if (!o.alive || static_cast<int>(k) == i || !g_.is_a(o.type, t.stype)) continue;
            int d = std::abs(o.x - sp(i).x) + std::abs(o.y - sp(i).y);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(k);
            }
        }
        if (best < 0) return;
        auto& cand = tmp_.candidates;
        cand.clear();
        for (int o = 0; o < 4; ++o) {
            Offset d = offset_of(static_cast<Orientation>(o));
            int nx = sp(i).x + d.dx;
            int ny = sp(i).y + d.dy;
            if (!s_.in_bounds(nx, ny)) continue;
            int nd = std::abs(sp(best).x - nx) + std::abs(sp(best).y - ny);
            if (towards ? nd < best_d : nd > best_d) cand.push_back(o);
        }
        if (cand.empty()) return;
        int pick = cand.size() == 1 ? cand[0] : cand[s_.rng.uniform(static_cast<std::uint32_t>(cand.size()))];
        sp(i).orientation = static_cast<Orientation>(pick);
        step(i, sp(i).orientation);
    }

    void spawner_update(int i) {
        if (!sp(i).alive) return;
        const auto& t = type_of(i);
        if (!t.cls || !is_spawner(*t.cls) || t.stype < 0) return;
        if (++sp(i).spawn_timer < std::max(1, t.cooldown)) return;
        sp(i).spawn_timer = 0;
        bool fire = t.prob >= 1.0 || (t.prob > 0.0 && s_.rng.bernoulli(t.prob));
        if (!fire) return;
        const auto& child = g_.types[static_cast<std::size_t>(t.stype)];
        int x = sp(i).x;
        int y = sp(i).y;
        if (spawn(t.stype, x, y, child.orientation) < 0) return;
        if (++sp(i).spawned >= t.total && t.total > 0) sp(i).alive = false;
    }

    // ---- collisions ----

    void collide() {
        const std::size_t n_coll = s_.sprites.size();
        s_.rebuild_index();
        tmp_.displaced.assign(n_coll, 0);
        tmp_.next_displaced.assign(n_coll, 0);

        for (std::size_t k = 0; k < tmp_.eos.size(); ++k) {
            int i = tmp_.eos[k];
            if (!sp(i).alive) continue;
            tmp_.pending.clear();
            for (int r : g_.eos_rules[static_cast<std::size_t>(sp(i).type)]) tmp_.pending.push_back({r, i, -1, 0, 0});
            apply_pending(sp(i).x, sp(i).y);
        }

        const std::size_t cells = static_cast<std::size_t>(s_.width * s_.height);
        for (std::size_t c = 0; c < cells; ++c) {
            if (s_.cell_start[c + 1] - s_.cell_start[c] < 2) continue;
            process_cell(static_cast<int>(c), false, n_coll);
        }

        for (int pass = 1; pass < 4; ++pass) {
            std::swap(tmp_.displaced, tmp_.next_displaced);
            std::fill(tmp_.next_displaced.begin(), tmp_.next_displaced.end(), 0);
            bool any = false;
            for (std::size_t i = 0; i < n_coll; ++i) any = any || (tmp_.displaced[i] && sp(static_cast<int>(i)).alive);
            if (!any) break;
            s_.rebuild_index();
            for (std::size_t c = 0; c < cells; ++c) {
                auto begin = s_.cell_start[c];
                auto end = s_.cell_start[c + 1];
                if (end - begin < 2) continue;
                bool touched = false;
                for (auto k = begin; k < end && !touched; ++k) {
                    auto idx = s_.cell_items[k];
                    touched = idx < n_coll && tmp_.displaced[idx];
                }
                if (touched) process_cell(static_cast<int>(c), true, n_coll);
            }
        }
    }

    bool seen_pair(std::uint32_t ua, std::uint32_t ub) {
        for (const auto& p : tmp_.evaluated) {
            if (p.first == ua && p.second == ub) return true;
        }
        return false;
    }

    void process_cell(int c, bool follow_up, std::size_t n_coll) {
        const int cx = c % s_.width;
        const int cy = c / s_.width;
        auto& items = tmp_.items;
        items.clear();
        for (auto k = s_.cell_start[static_cast<std::size_t>(c)]; k < s_.cell_start[static_cast<std::size_t>(c) + 1]; ++k) {
            auto idx = s_.cell_items[k];
            const auto& o = s_.sprites[idx];
            if (!o.alive || o.x != cx || o.y != cy) continue;
            if (follow_up && idx >= n_coll) continue;
            items.push_back(idx);
        }
        tmp_.pending.clear();
        for (std::size_t a = 0; a < items.size(); ++a) {
            for (std::size_t b = a + 1; b < items.size(); ++b) {
                int i = static_cast<int>(items[a]);
                int j = static_cast<int>(items[b]);
                auto ui = sp(i).uid;
                auto uj = sp(j).uid;
                if (follow_up) {
                    if (!tmp_.displaced[items[a]] && !tmp_.displaced[items[b]]) continue;
                    if (seen_pair(ui, uj)) continue;
                }
                auto rules = g_.rules_for(sp(i).type, sp(j).type);
                if (rules.empty()) continue;
                tmp_.evaluated.emplace_back(ui, uj);
                for (const auto& pr : rules) {
                    int first = pr.swapped ? j : i;
                    int second = pr.swapped ? i : j;
                    queue(pr.rule, first, second);
                }
            }
        }
        apply_pending(cx, cy);
    }

    void queue(int rule, int first, int second) {
        const auto& r = g_.rules[static_cast<std::size_t>(rule)];
        int dx = sp(second).x - sp(second).start_x;
        int dy = sp(second).y - sp(second).start_y;
        switch (r.effect) {
            case EffectClass::KillIfFromAbove:
                if (dy <= 0) return;
                break;
            case EffectClass::KillIfOtherHasMore:
                if (r.resource_slot < 0 || sp(second).resources[static_cast<std::size_t>(r.resource_slot)] < r.limit) return;
                break;
            default: break;
        }
        tmp_.pending.push_back({rule, first, second, dx, dy});
    }

    void move_to(int i, int x, int y) {
        if (!s_.in_bounds(x, y)) return;
        if (sp(i).x == x && sp(i).y == y) return;
        sp(i).x = static_cast<std::int16_t>(x);
        sp(i).y = static_cast<std::int16_t>(y);
        if (static_cast<std::size_t>(i) < tmp_.next_displaced.size()) tmp_.next_displaced[static_cast<std::size_t>(i)] = 1;
    }

    void apply_pending(int cx, int cy) {
        for (std::size_t k = 0; k < tmp_.pending.size(); ++k) {
            auto p = tmp_.pending[k];
            if (!sp(p.first).alive) continue;
            const auto& r = g_.rules[static_cast<std::size_t>(p.rule)];
            int first_type = sp(p.first).type;
            int second_type = p.second >= 0 ? sp(p.second).type : -1;
            apply(r, p);
            s_.score += r.score;
            out_.events.push_back({r.effect, first_type, second_type, cx, cy, r.score});
        }
        tmp_.pending.clear();
    }

    void apply(const CompiledRule& r, const TickScratch::Pending& p) {
        int a = p.first;
        int b = p.second;
        switch (r.effect) {
            case EffectClass::KillSprite:
            case EffectClass::KillIfFromAbove:
            case EffectClass::KillIfOtherHasMore: sp(a).alive = false; break;
            case EffectClass::KillBoth:
                sp(a).alive = false;
                if (b >= 0) sp(b).alive = false;
                break;
            case EffectClass::StepBack: move_to(a, sp(a).start_x, sp(a).start_y); break;
            case EffectClass::UndoAll:
                for (std::size_t i = 0; i < tmp_.next_displaced.size(); ++i) {
                    auto& o = s_.sprites[i];
                    if (o.alive) move_to(static_cast<int>(i), o.start_x, o.start_y);
                }
                break;
            case EffectClass::TransformTo: {
                if (r.stype < 0) break;
                sp(a).alive = false;
                Sprite old = sp(a);
                int n = spawn(r.stype, old.x, old.y, old.orientation);
                if (n >= 0) sp(n).resources = old.resources;
                break;
            }
            case EffectClass::CollectResource: {
                const auto& t = type_of(a);
                if (t.resource_slot < 0 || b < 0) break;
                auto& have = sp(b).resources[static_cast<std::size_t>(t.resource_slot)];
                have = std::min(have + t.value, t.limit);
                sp(a).alive = false;
                break;
            }
            case EffectClass::ChangeResource: {
                if (r.resource_slot < 0) break;
                const auto& rt = g_.types[static_cast<std::size_t>(g_.resource_types[static_cast<std::size_t>(r.resource_slot)])];
                auto& have = sp(a).resources[static_cast<std::size_t>(r.resource_slot)];
                have = std::clamp(have + r.value, 0, rt.limit);
                if (r.kill_at_limit && have >= rt.limit) sp(a).alive = false;
                break;
            }
            case EffectClass::ReverseDirection: sp(a).orientation = reversed(sp(a).orientation); break;
            case EffectClass::BounceForward: move_to(a, sp(a).x + sign(p.dx), sp(a).y + sign(p.dy)); break;
            case EffectClass::PullWithIt: move_to(a, sp(a).x + p.dx, sp(a).y + p.dy); break;
            case EffectClass::SpawnBehind:
                if (b >= 0 && r.stype >= 0) {
                    int x = sp(b).start_x;
                    int y = sp(b).start_y;
                    spawn(r.stype, x, y, g_.types[static_cast<std::size_t>(r.stype)].orientation);
                }
                break;
            case EffectClass::TeleportToExit: {
                if (b < 0) break;
                int exit = type_of(b).stype;
                if (exit < 0) break;
                auto& cand = tmp_.candidates;
                cand.clear();
                for (std::size_t i = 0; i < s_.sprites.size(); ++i) {
                    if (s_.sprites[i].alive && g_.is_a(s_.sprites[i].type, exit)) cand.push_back(static_cast<int>(i));
                }
                if (cand.empty()) break;
                int target = cand.size() == 1 ? cand[0] : cand[s_.rng.uniform(static_cast<std::uint32_t>(cand.size()))];
                move_to(a, sp(target).x, sp(target).y);
                break;
            }
            case EffectClass::WrapAround: {
                int x = sp(a).x;
                int y = sp(a).y;
                switch (sp(a).orientation) {
                    case Orientation::Right: x = 0; break;
                    case Orientation::Left: x = s_.width - 1; break;
                    case Orientation::Down: y = 0; break;
                    case Orientation::Up: y = s_.height - 1; break;
                }
                move_to(a, x, y);
                break;
            }
        }
    }

    void compact() {
        auto& v = s_.sprites;
        v.erase(std::remove_if(v.begin(), v.end(), [](const Sprite& x) { return !x.alive; }), v.end());
    }

    GameState& s_;
    const CompiledGame& g_;
    StepResult& out_;
    TickScratch& tmp_;
};

}  // namespace

GameState init_state(std::shared_ptr<const CompiledGame> game, const LevelGrid& level, std::uint64_t seed) {
    GameState s;
    s.width = level.width;
    s.height = level.height;
    s.rng = Rng(seed);
    if (level.width <= 0 || level.height <= 0 || level.width > 4096 || level.height > 4096) {
        throw Error(ErrorKind::IncompatibleLevel, "level dimensions out of range");
    }
    std::optional<SpriteClass> avatar_cls;
    for (int y = 0; y < level.height; ++y) {
        for (int x = 0; x < level.width; ++x) {
            for (const auto& id : level.at(x, y)) {
                int t = game->find_type(id);
                if (t < 0) throw Error(ErrorKind::IncompatibleLevel, "level places unknown sprite '" + id + "'");
                const auto& ct = game->types[static_cast<std::size_t>(t)];
                if (!ct.cls) throw Error(ErrorKind::IncompatibleLevel, "level places abstract sprite '" + id + "'");
                if (is_avatar(*ct.cls)) avatar_cls = ct.cls;
                Sprite sp;
                sp.uid = s.next_uid++;
                sp.type = static_cast<std::int16_t>(t);
                sp.x = sp.start_x = static_cast<std::int16_t>(x);
                sp.y = sp.start_y = static_cast<std::int16_t>(y);
                sp.orientation = ct.orientation;
                s.sprites.push_back(sp);
            }
        }
    }
    s.actions = action_space_for(avatar_cls.value_or(SpriteClass::MovingAvatar));
    s.game = std::move(game);
    s.rebuild_index();
    return s;
}

GameState init_state(const GameDescription& desc, const LevelGrid& level, std::uint64_t seed) {
    return init_state(compile(desc), level, seed);
}

StepResult advance(GameState& state, Action action) {
    if (state.status != Status::Running) {
        throw Error(ErrorKind::GameOver, "episode already ended with status " + std::string(to_string(state.status)));
    }
    if (!state.actions.contains(action)) {
        throw Error(ErrorKind::IllegalAction, "action " + std::string(to_string(action)) + " is not available");
    }
    StepResult out;
    const std::int64_t before = state.score;
    Ticker(state, out).run(action);
    if (auto t = evaluate_termination(state)) {
        state.status = t->status;
        state.score += t->bonus;
        out.bonus = t->bonus;
    }
    out.reward = state.score - before;
    out.status = state.status;
    return out;
}

std::optional<TerminationOutcome> evaluate_termination(const GameState& state) {
    for (const auto& t : state.game->terminations) {
        bool fired = false;
        switch (t.kind) {
            case TerminationKind::SpriteCounter:
                fired = !t.stypes.empty() && state.count(t.stypes[0]) <= t.limit;
                break;
            case TerminationKind::MultiSpriteCounter: {
                std::int64_t sum = 0;
                for (int st : t.stypes) sum += state.count(st);
                fired = sum == t.limit;
                break;
            }
            case TerminationKind::Timeout: fired = state.tick >= t.limit; break;
        }
        if (fired) return TerminationOutcome{t.win ? Status::Win : Status::Lose, t.bonus};
    }
    return std::nullopt;
}

Status check_termination(GameState& state) {
    if (state.status != Status::Running) return state.status;
    if (auto t = evaluate_termination(state)) {
        state.status = t->status;
        state.score += t->bonus;
    }
    return state.status;
}

// ---- canonical byte form ----

namespace {

constexpr std::uint16_t kStateFormatVersion = 1;

struct Writer {
    std::vector<std::uint8_t> out;
    template <typename T>
    void put(T v) {
        using U = std::make_unsigned_t<T>;
        auto u = static_cast<U>(v);
        for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }
};

struct Reader {
    std::span<const std::uint8_t> in;
    std::size_t pos = 0;
    template <typename T>
    T get() {
        if (pos + sizeof(T) > in.size()) throw Error(ErrorKind::InvalidValue, "truncated state bytes");
        using U = std::make_unsigned_t<T>;
        U u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(in[pos + i]) << (8 * i));
        pos += sizeof(T);
        return static_cast<T>(u);
    }
};

}  // namespace

std::vector<std::uint8_t> serialize_state(const GameState& s) {
    Writer w;
    w.out.reserve(64 + s.sprites.size() * 32);
    for (char c : std::string_view("GVGS")) w.put<std::uint8_t>(static_cast<std::uint8_t>(c));
    w.put<std::uint16_t>(kStateFormatVersion);
    w.put<std::uint16_t>(static_cast<std::uint16_t>(s.width));
    w.put<std::uint16_t>(static_cast<std::uint16_t>(s.height));
    w.put<std::int64_t>(s.tick);
    w.put<std::int64_t>(s.score);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.status));
    w.put<std::uint64_t>(s.rng.state);
    w.put<std::uint32_t>(s.next_uid);
    w.put<std::uint8_t>(s.actions.size);
    for (Action a : s.actions.view()) w.put<std::uint8_t>(static_cast<std::uint8_t>(a));
    std::uint32_t alive = 0;
    for (const auto& sp : s.sprites) alive += sp.alive;
    w.put<std::uint32_t>(alive);
    for (const auto& sp : s.sprites) {
        if (!sp.alive) continue;
        w.put<std::uint32_t>(sp.uid);
        w.put<std::int16_t>(sp.type);
        w.put<std::int16_t>(sp.x);
        w.put<std::int16_t>(sp.y);
        w.put<std::uint8_t>(static_cast<std::uint8_t>(sp.orientation));
        w.put<std::int32_t>(sp.move_timer);
        w.put<std::int32_t>(sp.spawn_timer);
        w.put<std::int32_t>(sp.age);
        w.put<std::int32_t>(sp.spawned);
        std::uint8_t nonzero = 0;
        for (auto r : sp.resources) nonzero += r != 0;
        w.put<std::uint8_t>(nonzero);
        for (std::size_t k = 0; k < sp.resources.size(); ++k) {
            if (sp.resources[k] == 0) continue;
            w.put<std::uint8_t>(static_cast<std::uint8_t>(k));
            w.put<std::int32_t>(sp.resources[k]);
        }
    }
    return std::move(w.out);
}

GameState deserialize_state(std::shared_ptr<const CompiledGame> game, std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    auto bad = [](const char* why) { return Error(ErrorKind::InvalidValue, std::string("bad state bytes: ") + why); };
    for (char c : std::string_view("GVGS")) {
        if (r.get<std::uint8_t>() != static_cast<std::uint8_t>(c)) throw bad("magic");
    }
    if (r.get<std::uint16_t>() != kStateFormatVersion) throw bad("version");
    GameState s;
    s.width = r.get<std::uint16_t>();
    s.height = r.get<std::uint16_t>();
    if (s.width == 0 || s.height == 0) throw bad("dimensions");
    s.tick = r.get<std::int64_t>();
    s.score = r.get<std::int64_t>();
    auto status = r.get<std::uint8_t>();
    if (status > static_cast<std::uint8_t>(Status::Aborted)) throw bad("status");
    s.status = static_cast<Status>(status);
    s.rng.state = r.get<std::uint64_t>();
    s.next_uid = r.get<std::uint32_t>();
    s.actions.size = r.get<std::uint8_t>();
    if (s.actions.size > s.actions.items.size()) throw bad("action count");
    for (std::size_t i = 0; i < s.actions.size; ++i) {
        auto a = r.get<std::uint8_t>();
        if (a > static_cast<std::uint8_t>(Action::Nil)) throw bad("action");
        s.actions.items[i] = static_cast<Action>(a);
    }
    auto n = r.get<std::uint32_t>();
    if (n > bytes.size()) throw bad("sprite count");
    s.sprites.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Sprite sp;
        sp.uid = r.get<std::uint32_t>();
        sp.type = r.get<std::int16_t>();
        sp.x = sp.start_x = r.get<std::int16_t>();
        sp.y = sp.start_y = r.get<std::int16_t>();
        auto o = r.get<std::uint8_t>();
        if (o > 3) throw bad("orientation");
        sp.orientation = static_cast<Orientation>(o);
        sp.move_timer = r.get<std::int32_t>();
        sp.spawn_timer = r.get<std::int32_t>();
        sp.age = r.get<std::int32_t>();
        sp.spawned = r.get<std::int32_t>();
        auto nz = r.get<std::uint8_t>();
        for (std::uint8_t k = 0; k < nz; ++k) {
            auto slot = r.get<std::uint8_t>();
            if (slot >= kMaxResources) throw bad("resource slot");
            sp.resources[slot] = r.get<std::int32_t>();
        }
        if (sp.type < 0 || sp.type >= game->type_count()) throw bad("sprite type");
        if (!s.in_bounds(sp.x, sp.y)) throw bad("sprite position");
        s.sprites.push_back(sp);
    }
    if (r.pos != bytes.size()) throw bad("trailing bytes");
    s.game = std::move(game);
    s.rebuild_index();
    return s;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t h) {
    for (auto b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t h) {
    for (char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t state_hash(const GameState& state) { return fnv1a64(serialize_state(state)); }

}  // namespace gvg
