#pragma once

#include "tailgame/chain.hpp"
#include "tailgame/fixtures.hpp"
#include "tailgame/game.hpp"
#include "tailgame/game_io.hpp"
#include "tailgame/mdp.hpp"
#include "tailgame/random_game.hpp"
#include "tailgame/simulate.hpp"
#include "tailgame/strategies.hpp"
#include "tailgame/strategy.hpp"
#include "tailgame/strategy_io.hpp"
#include "tailgame/values.hpp"
#include "tailgame/checks.hpp"
