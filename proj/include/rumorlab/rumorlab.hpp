#pragma once

#include "rumorlab/chernoff.hpp"
#include "rumorlab/coupling.hpp"
#include "rumorlab/dominance.hpp"
#include "rumorlab/error.hpp"
#include "rumorlab/experiments.hpp"
#include "rumorlab/generators.hpp"
#include "rumorlab/graph.hpp"
#include "rumorlab/io.hpp"
#include "rumorlab/maxflow.hpp"
#include "rumorlab/parallel.hpp"
#include "rumorlab/protocol.hpp"
#include "rumorlab/rational.hpp"
#include "rumorlab/rng.hpp"
#include "rumorlab/stats.hpp"
#include "rumorlab/vpull.hpp"
