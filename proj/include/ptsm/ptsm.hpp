#pragma once

// Umbrella header.

#include "error.hpp"
#include "rational.hpp"
#include "system.hpp"
#include "system_json.hpp"
#include "random.hpp"
#include "formula.hpp"
#include "parser.hpp"
#include "evaluator.hpp"
#include "simplex.hpp"
#include "transport.hpp"
#include "metrics.hpp"
#include "approximation.hpp"
#include "game.hpp"
#include "game_json.hpp"
