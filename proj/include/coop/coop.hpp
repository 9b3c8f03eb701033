#pragma once

#include "coop/bounds.hpp"
#include "coop/centralized.hpp"
#include "coop/combinatorics.hpp"
#include "coop/config.hpp"
#include "coop/decentralized.hpp"
#include "coop/maxflow.hpp"
#include "coop/rational.hpp"
#include "coop/schedule.hpp"
#include "coop/simulator.hpp"
