#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gvg/games.hpp"
#include "helpers.hpp"

using namespace gvg;
using gvg::test::kMinimalGame;
using gvg::test::make_state;

namespace {

std::vector<std::uint8_t> bytes_of(const GameState& s) { return serialize_state(s); }

Action random_action(const GameState& s, Rng& r) {
    auto acts = s.actions.view();
    return acts[r.uniform(static_cast<std::uint32_t>(acts.size()))];
}

const Corpus& corpus() {
    static const Corpus c = Corpus::load();
    return c;
}

int count_type(const GameState& s, std::string_view id) { return s.count(s.game->find_type(id)); }

}  // namespace

TEST(Init, MinimalGame) {
    auto s = make_state(kMinimalGame, "   \n A \n   \n");
    EXPECT_EQ(s.tick, 0);
    EXPECT_EQ(s.score, 0);
    EXPECT_EQ(s.status, Status::Running);
    ASSERT_EQ(s.sprites.size(), 1u);
    EXPECT_EQ(s.avatar_index(), 0);
    EXPECT_EQ(s.sprites[0].x, 1);
    EXPECT_EQ(s.sprites[0].y, 1);
}

TEST(Init, SameSeedSameBytes) {
    const auto& g = corpus().get("aliens");
    EXPECT_EQ(bytes_of(g.start(0, 7)), bytes_of(g.start(0, 7)));
}

TEST(Init, IncompatibleLevel) {
    auto desc = parse_game(kMinimalGame);
    LevelGrid level = parse_level("A", desc);
    level.cells[0].push_back("ghost");
    try {
        init_state(desc, level, 1);
        FAIL() << "expected IncompatibleLevel";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IncompatibleLevel);
    }
}

TEST(Init, ActionSpacePerAvatarClass) {
    // oracle: the avatar-class table in docs/games.md
    using A = Action;
    const std::map<SpriteClass, std::vector<Action>> table = {
        {SpriteClass::MovingAvatar, {A::Up, A::Down, A::Left, A::Right, A::Nil}},
        {SpriteClass::OrientedAvatar, {A::Up, A::Down, A::Left, A::Right, A::Nil}},
        {SpriteClass::ShootAvatar, {A::Up, A::Down, A::Left, A::Right, A::Use, A::Nil}},
        {SpriteClass::FlakAvatar, {A::Left, A::Right, A::Use, A::Nil}},
    };
    for (const auto& id : corpus().ids()) {
        const auto& g = corpus().get(id);
        auto s = g.start(0, 1);
        int a = s.avatar_index();
        ASSERT_GE(a, 0) << id;
        auto cls = *s.game->types[static_cast<std::size_t>(s.sprites[static_cast<std::size_t>(a)].type)].cls;
        std::vector<Action> got(s.actions.view().begin(), s.actions.view().end());
        EXPECT_EQ(got, table.at(cls)) << id;
    }
    auto aliens = corpus().get("aliens").start(0, 1);
    std::vector<Action> got(aliens.actions.view().begin(), aliens.actions.view().end());
    EXPECT_EQ(got, (std::vector<Action>{A::Left, A::Right, A::Use, A::Nil}));
}

TEST(Advance, StepBackIntoWall) {
    std::string game = kMinimalGame + "        w > wall\n";
    auto s = make_state(game, "wA \n");
    auto r = advance(s, Action::Left);
    EXPECT_EQ(s.sprites[static_cast<std::size_t>(s.avatar_index())].x, 1);
    EXPECT_EQ(r.reward, 0);
    ASSERT_EQ(r.events.size(), 1u);
    EXPECT_EQ(r.events[0].effect, EffectClass::StepBack);
    advance(s, Action::Right);
    EXPECT_EQ(s.sprites[static_cast<std::size_t>(s.avatar_index())].x, 2);
}

TEST(Advance, MoveOffGridWithoutRuleIsBlocked) {
    auto s = make_state(kMinimalGame, "A\n");
    advance(s, Action::Up);
    EXPECT_EQ(s.sprites[0].x, 0);
    EXPECT_EQ(s.sprites[0].y, 0);
    EXPECT_EQ(s.sprites[0].orientation, Orientation::Up);
}

TEST(Advance, RejectsIllegalActionAndFinishedEpisodes) {
    auto s = make_state(kMinimalGame, "A\n");
    try {
        advance(s, Action::Use);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IllegalAction);
    }
    while (s.status == Status::Running) advance(s, Action::Nil);
    try {
        advance(s, Action::Nil);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::GameOver);
    }
}

TEST(Advance, FrogsWinGivesOnePoint) {
    const auto& g = corpus().get("frogs");
    auto s = g.start(0, 3);
    // find a winning path by breadth-first search over the forward model
    std::vector<std::pair<GameState, std::vector<Action>>> frontier{{s, {}}};
    std::vector<Action> plan;
    for (int depth = 0; depth < 14 && plan.empty(); ++depth) {
        std::vector<std::pair<GameState, std::vector<Action>>> next;
        std::set<std::tuple<int, int, std::int64_t>> seen;
        for (auto& [st, path] : frontier) {
            for (Action a : st.actions.view()) {
                GameState c = st;
                advance(c, a);
                auto p = path;
                p.push_back(a);
                if (c.status == Status::Win) {
                    plan = p;
                    break;
                }
                if (c.status != Status::Running) continue;
                const auto& av = c.sprites[static_cast<std::size_t>(c.avatar_index())];
                if (seen.insert({av.x, av.y, c.tick}).second) next.emplace_back(std::move(c), std::move(p));
            }
            if (!plan.empty()) break;
        }
        frontier = std::move(next);
    }
    ASSERT_FALSE(plan.empty());
    std::int64_t total = 0;
    int nonzero = 0;
    for (Action a : plan) {
        auto r = advance(s, a);
        total += r.reward;
        nonzero += r.reward != 0;
    }
    EXPECT_EQ(s.status, Status::Win);
    EXPECT_EQ(total, 1);
    EXPECT_EQ(nonzero, 1);
}

TEST(Advance, SeaquestDrownsAfter25TicksUnderwater) {
    const auto& g = corpus().get("seaquest");
    // sky row, then open water without spawners
    auto level = parse_level("sssAsss\n.......\n.......\n", g.desc);
    auto s = init_state(g.compiled, level, 1);
    advance(s, Action::Down);  // first tick below the surface
    int underwater = 1;
    while (s.status == Status::Running) {
        advance(s, Action::Nil);
        ++underwater;
        ASSERT_LE(underwater, 25);
    }
    EXPECT_EQ(underwater, 25);
    EXPECT_EQ(s.status, Status::Lose);
}

TEST(Advance, SeaquestSurfacingRefillsAir) {
    const auto& g = corpus().get("seaquest");
    auto level = parse_level("sssAsss\n.......\n.......\n", g.desc);
    auto s = init_state(g.compiled, level, 1);
    advance(s, Action::Down);
    for (int i = 0; i < 20; ++i) advance(s, Action::Nil);
    advance(s, Action::Up);
    advance(s, Action::Down);
    for (int i = 0; i < 23; ++i) advance(s, Action::Nil);
    EXPECT_EQ(s.status, Status::Running);
}

TEST(Termination, AvatarKilledIsLoss) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        lava > Immovable
    InteractionSet
        avatar lava > killSprite
    TerminationSet
        SpriteCounter stype=avatar limit=0 win=False
    LevelMapping
        A > avatar
        l > lava
)";
    auto s = make_state(game, "Al\n");
    auto r = advance(s, Action::Right);
    EXPECT_EQ(r.status, Status::Lose);
    EXPECT_EQ(s.status, Status::Lose);
    EXPECT_EQ(s.avatar_index(), -1);
}

TEST(Termination, TimeoutBoundary) {
    std::string game = kMinimalGame;
    auto s = make_state(game, "A\n");
    for (int i = 0; i < 99; ++i) advance(s, Action::Nil);
    EXPECT_EQ(s.status, Status::Running);
    EXPECT_EQ(s.tick, 99);
    advance(s, Action::Nil);
    EXPECT_EQ(s.status, Status::Lose);
    EXPECT_EQ(s.tick, 100);
}

TEST(Termination, ImplicitTimeoutAt2000) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
    InteractionSet
    TerminationSet
    LevelMapping
        A > avatar
)";
    auto s = make_state(game, "A\n");
    for (int i = 0; i < 1999; ++i) advance(s, Action::Nil);
    EXPECT_EQ(s.status, Status::Running);
    advance(s, Action::Nil);
    EXPECT_EQ(s.status, Status::Lose);
    EXPECT_EQ(s.tick, 2000);
}

TEST(Termination, BonusIsAppliedOnceAndReported) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        coin > Immovable
    InteractionSet
        coin avatar > killSprite scoreChange=2
    TerminationSet
        SpriteCounter stype=coin limit=0 win=True bonus=1000
    LevelMapping
        A > avatar
        c > coin
)";
    auto s = make_state(game, "Ac\n");
    auto r = advance(s, Action::Right);
    EXPECT_EQ(r.status, Status::Win);
    EXPECT_EQ(r.bonus, 1000);
    EXPECT_EQ(r.reward, 1002);
    EXPECT_EQ(s.score, 1002);
}

TEST(Termination, MultiSpriteCounterSumsEquality) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        a > Immovable
        b > Immovable
    InteractionSet
        a avatar > killSprite
        b avatar > killSprite
    TerminationSet
        MultiSpriteCounter stype1=a stype2=b limit=0 win=True
    LevelMapping
        A > avatar
        x > a
        y > b
)";
    auto s = make_state(game, "Axy\n");
    advance(s, Action::Right);
    EXPECT_EQ(s.status, Status::Running);
    advance(s, Action::Right);
    EXPECT_EQ(s.status, Status::Win);
}

TEST(Serialize, RngOnlyDifferenceChangesBytes) {
    auto a = make_state(kMinimalGame, "A\n", 1);
    auto b = make_state(kMinimalGame, "A\n", 2);
    EXPECT_NE(bytes_of(a), bytes_of(b));
    b.rng = a.rng;
    EXPECT_EQ(bytes_of(a), bytes_of(b));
}

TEST(Serialize, RoundTripFixpointOverRandomStates) {
    Rng pick(11);
    int checked = 0;
    for (const auto& id : corpus().ids()) {
        const auto& g = corpus().get(id);
        for (int k = 0; k < 13 && checked < 104; ++k, ++checked) {
            auto s = g.start(0, 100 + static_cast<std::uint64_t>(k));
            int steps = static_cast<int>(pick.uniform(60));
            for (int i = 0; i < steps && s.status == Status::Running; ++i) advance(s, random_action(s, pick));
            auto b1 = serialize_state(s);
            auto back = deserialize_state(g.compiled, b1);
            EXPECT_EQ(serialize_state(back), b1) << id;
            EXPECT_EQ(back.cell_items, s.cell_items) << id;
        }
    }
    EXPECT_GE(checked, 100);
}

TEST(Serialize, RejectsGarbage) {
    const auto& g = corpus().get("aliens");
    auto bytes = serialize_state(g.start(0, 1));
    std::vector<std::vector<std::uint8_t>> bad = {
        {},
        {'G', 'V', 'G'},
        std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 1),
    };
    auto wrong_magic = bytes;
    wrong_magic[0] = 'X';
    bad.push_back(wrong_magic);
    auto extra = bytes;
    extra.push_back(0);
    bad.push_back(extra);
    for (const auto& b : bad) {
        EXPECT_THROW(deserialize_state(g.compiled, b), Error);
    }
    Rng r(5);
    for (int i = 0; i < 2000; ++i) {
        auto m = bytes;
        m[r.uniform(static_cast<std::uint32_t>(m.size()))] ^= static_cast<std::uint8_t>(1 + r.uniform(255));
        try {
            auto s = deserialize_state(g.compiled, m);
            EXPECT_EQ(serialize_state(s), m);  // anything accepted must be canonical
        } catch (const Error&) {
        }
    }
}

TEST(Clone, AdvancingCloneLeavesSourceUntouched) {
    const auto& g = corpus().get("boulderdash");
    auto s = g.start(0, 3);
    auto before = bytes_of(s);
    auto c = clone_state(s);
    Rng r(2);
    for (int i = 0; i < 50 && c.status == Status::Running; ++i) advance(c, random_action(c, r));
    EXPECT_EQ(bytes_of(s), before);
    EXPECT_NE(bytes_of(c), before);
}

TEST(Clone, SameActionsSameTrajectory) {
    for (const auto& id : corpus().ids()) {
        const auto& g = corpus().get(id);
        auto a = g.start(0, 9);
        auto b = clone_state(a);
        Rng r(3);
        while (a.status == Status::Running) {
            Action act = random_action(a, r);
            auto ra = advance(a, act);
            auto rb = advance(b, act);
            ASSERT_EQ(bytes_of(a), bytes_of(b)) << id << " tick " << a.tick;
            ASSERT_EQ(ra.events, rb.events);
        }
    }
}

TEST(Properties, ForwardModelFidelity) {
    Rng r(21);
    for (const auto& id : corpus().ids()) {
        const auto& g = corpus().get(id);
        auto s = g.start(0, 5);
        while (s.status == Status::Running && s.tick < 150) {
            for (Action a : s.actions.view()) {
                auto c1 = clone_state(s);
                auto c2 = deserialize_state(g.compiled, serialize_state(s));
                advance(c1, a);
                advance(c2, a);
                ASSERT_EQ(bytes_of(c1), bytes_of(c2)) << id;
            }
            advance(s, random_action(s, r));
        }
    }
}

TEST(Properties, RewardTelescopesAndScoreMatchesEvents) {
    Rng r(8);
    for (const auto& id : corpus().ids()) {
        const auto& g = corpus().get(id);
        for (int e = 0; e < 10; ++e) {
            auto s = g.start(0, static_cast<std::uint64_t>(e));
            std::int64_t rewards = 0, event_points = 0, bonus = 0;
            while (s.status == Status::Running) {
                auto res = advance(s, random_action(s, r));
                rewards += res.reward;
                bonus += res.bonus;
                for (const auto& ev : res.events) event_points += ev.score;
                ASSERT_EQ(res.status, s.status);
            }
            EXPECT_EQ(rewards, s.score) << id;
            EXPECT_EQ(event_points + bonus, s.score) << id;
        }
    }
}

TEST(Properties, IndexAgreesWithSprites) {
    Rng r(4);
    for (const auto& id : corpus().ids()) {
        const auto& g = corpus().get(id);
        auto s = g.start(0, 2);
        while (s.status == Status::Running) {
            advance(s, random_action(s, r));
            auto rebuilt = s;
            rebuilt.rebuild_index();
            ASSERT_EQ(rebuilt.cell_start, s.cell_start);
            ASSERT_EQ(rebuilt.cell_items, s.cell_items);
            std::size_t indexed = 0;
            for (int y = 0; y < s.height; ++y) {
                for (int x = 0; x < s.width; ++x) {
                    for (auto i : s.at(x, y)) {
                        ASSERT_EQ(s.sprites[i].x, x);
                        ASSERT_EQ(s.sprites[i].y, y);
                        ++indexed;
                    }
                }
            }
            ASSERT_EQ(indexed, s.sprites.size());
        }
    }
}

TEST(Properties, ConservationWithoutInteractions) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        m > Missile orientation=RIGHT
        slow > Missile orientation=DOWN speed=0.3
        r > RandomNPC
        c > Chaser stype=avatar
        f > Fleeing stype=avatar speed=0.5
        box > Passive
    InteractionSet
    TerminationSet
        Timeout limit=300
    LevelMapping
        A > avatar
        m > m
        s > slow
        r > r
        c > c
        f > f
        b > box
)";
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto s = make_state(game, "m  r  \n s  c \nA  f b\n  rr  \n", seed);
        Rng pick(seed);
        auto n = s.sprites.size();
        while (s.status == Status::Running) {
            auto res = advance(s, random_action(s, pick));
            ASSERT_TRUE(res.events.empty());
            ASSERT_EQ(s.sprites.size(), n);
        }
    }
}

namespace {

std::string pair_game(const std::string& r1, const std::string& r2) {
    return R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        coin > Immovable
        other > Immovable
        third > Immovable
        gem > Resource limit=5
        ore > Resource limit=5
    InteractionSet
        )" + r1 + "\n        " +
           r2 + R"(
    TerminationSet
        Timeout limit=50
    LevelMapping
        A > avatar
        c > coin
)";
}

std::vector<std::uint8_t> outcome(const std::string& r1, const std::string& r2) {
    auto s = make_state(pair_game(r1, r2), "Ac \n", 1);
    advance(s, Action::Right);
    advance(s, Action::Right);
    return serialize_state(s);
}

}  // namespace

TEST(Properties, RuleOrderMattersOnlyForNonCommutingEffects) {
    struct Case {
        std::string a, b;
        bool commute;  // hand-derived: do the two effects commute on this pair?
    };
    const std::vector<Case> cases = {
        {"avatar coin > changeResource resource=gem value=1", "avatar coin > changeResource resource=ore value=2", true},
        {"coin avatar > killSprite scoreChange=1", "avatar coin > changeResource resource=gem value=3", true},
        {"avatar coin > changeResource resource=gem value=2", "avatar coin > changeResource resource=gem value=1", true},
        // resources clamp at 0: 0+2-1 = 1 but max(0-1, 0)+2 = 2
        {"avatar coin > changeResource resource=gem value=2", "avatar coin > changeResource resource=gem value=-1", false},
        {"coin avatar > killSprite scoreChange=2", "coin avatar > killSprite scoreChange=5", false},
        {"coin avatar > transformTo stype=other", "coin avatar > transformTo stype=third", false},
        {"coin avatar > transformTo stype=other", "coin avatar > killSprite scoreChange=4", false},
        // the avatar reaches the limit and dies in either order
        {"avatar coin > changeResource resource=gem value=5 killAtLimit=True", "avatar coin > changeResource resource=gem value=-2", true},
        {"avatar coin > stepBack", "coin avatar > killSprite scoreChange=1", true},
    };
    for (const auto& c : cases) {
        bool same = outcome(c.a, c.b) == outcome(c.b, c.a);
        EXPECT_EQ(same, c.commute) << c.a << " / " << c.b;
    }
}

TEST(Effects, EachEffectOnItsOwn) {
    // avatar walks right into a sprite of class `cls` with rule `rule`; check the visible result
    auto run = [](const std::string& sprites, const std::string& rules, const std::string& level, std::vector<Action> moves) {
        std::string g = "BasicGame\n    SpriteSet\n        avatar > MovingAvatar\n" + sprites + "    InteractionSet\n" + rules +
                        "    TerminationSet\n        Timeout limit=50\n    LevelMapping\n        A > avatar\n        x > x\n"
                        "        y > y\n";
        auto s = make_state(g, level);
        for (auto m : moves) advance(s, m);
        return s;
    };
    {
        auto s = run("        x > Immovable\n        y > Immovable\n", "        avatar x > killBoth scoreChange=3\n", "Ax\n", {Action::Right});
        EXPECT_TRUE(s.sprites.empty());
        EXPECT_EQ(s.score, 3);
    }
    {
        auto s = run("        x > Immovable\n        y > Immovable\n", "        x avatar > transformTo stype=y\n", "Ax\n", {Action::Right});
        EXPECT_EQ(count_type(s, "x"), 0);
        EXPECT_EQ(count_type(s, "y"), 1);
    }
    {
        // bounceForward pushes the box one cell in the avatar's direction of travel
        auto s = run("        x > Passive\n        y > Immovable\n", "        x avatar > bounceForward\n", "Ax  \n", {Action::Right});
        int b = -1;
        for (std::size_t i = 0; i < s.sprites.size(); ++i) {
            if (s.sprites[i].type == s.game->find_type("x")) b = static_cast<int>(i);
        }
        ASSERT_GE(b, 0);
        EXPECT_EQ(s.sprites[static_cast<std::size_t>(b)].x, 2);
    }
    {
        auto s = run("        x > Portal stype=y\n        y > Immovable\n", "        avatar x > teleportToExit\n", "Ax  y\n",
                     {Action::Right});
        auto a = s.sprites[static_cast<std::size_t>(s.avatar_index())];
        EXPECT_EQ(a.x, 4);
    }
    {
        auto s = run("        x > Immovable\n        y > Immovable\n", "        avatar x > spawnBehind stype=y\n", "Ax\n",
                     {Action::Right});
        EXPECT_EQ(count_type(s, "y"), 1);
    }
    {
        auto s = run("        x > Missile orientation=LEFT\n        y > Immovable\n", "        x EOS > wrapAround\n", "A  x\n", {Action::Nil, Action::Nil,
                                                                                                    Action::Nil, Action::Nil});
        // x moved left 3 cells to column 0, then wrapped to the last column
        int b = -1;
        for (std::size_t i = 0; i < s.sprites.size(); ++i) {
            if (s.sprites[i].type == s.game->find_type("x")) b = static_cast<int>(i);
        }
        ASSERT_GE(b, 0);
        EXPECT_EQ(s.sprites[static_cast<std::size_t>(b)].x, 3);
    }
    {
        auto s = run("        x > Missile orientation=RIGHT\n        y > Immovable\n", "        x EOS > reverseDirection\n", "A x\n", {Action::Nil});
        EXPECT_EQ(s.sprites[1].orientation, Orientation::Left);
    }
    {
        // killIfFromAbove only fires when the other sprite moved down into the cell
        auto s = run("        x > Immovable\n        y > Immovable\n", "        x avatar > killIfFromAbove scoreChange=1\n", "Ax\n x\n", {Action::Right, Action::Down});
        EXPECT_EQ(s.score, 1);
        EXPECT_EQ(count_type(s, "x"), 1);
    }
    {
        auto s = run("        x > Immovable\n        y > Immovable\n", "        avatar x > undoAll\n", "Ax\n", {Action::Right});
        EXPECT_EQ(s.sprites[static_cast<std::size_t>(s.avatar_index())].x, 0);
    }
}

TEST(Effects, CollectResourceCapsAtLimit) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        gem > Resource limit=2
        door > Immovable
    InteractionSet
        gem avatar > collectResource scoreChange=1
        door avatar > killIfOtherHasMore resource=gem limit=2
        avatar door > stepBack
    TerminationSet
        SpriteCounter stype=door limit=0 win=True
    LevelMapping
        A > avatar
        g > gem
        d > door
)";
    auto s = make_state(game, "Adggg\n");
    advance(s, Action::Right);  // door blocks, no gems yet
    EXPECT_EQ(count_type(s, "door"), 1);
    auto s2 = make_state(game, "Agggd\n");
    for (int i = 0; i < 4; ++i) advance(s2, Action::Right);
    EXPECT_EQ(s2.score, 3);
    const auto& av = s2.sprites[static_cast<std::size_t>(s2.avatar_index())];
    EXPECT_EQ(av.resources[0], 2);
    EXPECT_EQ(s2.status, Status::Win);
}

TEST(Dynamics, SpeedGivesStepPeriod) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        half > Missile orientation=RIGHT speed=0.5
        third > Missile orientation=RIGHT speed=0.3
    InteractionSet
    TerminationSet
        Timeout limit=100
    LevelMapping
        A > avatar
        h > half
        t > third
)";
    auto s = make_state(game, "A        \nh        \nt        \n");
    std::vector<int> hx, tx;
    for (int i = 0; i < 6; ++i) {
        advance(s, Action::Nil);
        hx.push_back(s.sprites[1].x);
        tx.push_back(s.sprites[2].x);
    }
    EXPECT_EQ(hx, (std::vector<int>{0, 1, 1, 2, 2, 3}));
    EXPECT_EQ(tx, (std::vector<int>{0, 0, 1, 1, 1, 2}));
}

TEST(Dynamics, SpawnpointHonoursTotalAndCooldown) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
        egg > Immovable
        nest > Spawnpoint stype=egg cooldown=3 total=2
    InteractionSet
    TerminationSet
        Timeout limit=100
    LevelMapping
        A > avatar
        n > nest
)";
    auto s = make_state(game, "An\n");
    std::vector<int> eggs;
    for (int i = 0; i < 8; ++i) {
        advance(s, Action::Nil);
        eggs.push_back(count_type(s, "egg"));
    }
    EXPECT_EQ(eggs, (std::vector<int>{0, 0, 1, 1, 1, 2, 2, 2}));
    EXPECT_EQ(count_type(s, "nest"), 0);
}

TEST(Dynamics, ShootAvatarCooldownAndSingleton) {
    const std::string game = R"(BasicGame
    SpriteSet
        avatar > ShootAvatar stype=bolt cooldown=2
        bolt > Immovable singleton=True
    InteractionSet
    TerminationSet
        Timeout limit=100
    LevelMapping
        A > avatar
)";
    auto s = make_state(game, "A   \n    \n");
    advance(s, Action::Right);
    advance(s, Action::Use);
    EXPECT_EQ(count_type(s, "bolt"), 1);
    EXPECT_EQ(s.sprites[1].x, 2);
    advance(s, Action::Use);  // singleton: still one
    EXPECT_EQ(count_type(s, "bolt"), 1);
}
