#pragma once

#include "lorcal/any_model.hpp"
#include "lorcal/causal_dag.hpp"
#include "lorcal/concavity.hpp"
#include "lorcal/core.hpp"
#include "lorcal/cylinder.hpp"
#include "lorcal/format.hpp"
#include "lorcal/geodesic.hpp"
#include "lorcal/io.hpp"
#include "lorcal/minkowski.hpp"
#include "lorcal/rng.hpp"
#include "lorcal/scenario.hpp"
#include "lorcal/space.hpp"
#include "lorcal/sprinkle.hpp"
#include "lorcal/tau_engine.hpp"
