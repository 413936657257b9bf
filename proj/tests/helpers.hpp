#pragma once

#include <string>

#include "gvg/engine.hpp"
#include "gvg/vgdl.hpp"

namespace gvg::test {

inline const std::string kMinimalGame = R"(BasicGame
    SpriteSet
        avatar > MovingAvatar
    InteractionSet
        avatar wall > stepBack
    TerminationSet
        Timeout limit=100
    LevelMapping
        A > avatar
)";

inline GameState make_state(const std::string& game, const std::string& level, std::uint64_t seed = 1) {
    auto desc = parse_game(game);
    return init_state(desc, parse_level(level, desc), seed);
}

}  // namespace gvg::test
