#pragma once

#include "hjgraph/cost_model.hpp"
#include "hjgraph/ergodic.hpp"
#include "hjgraph/error.hpp"
#include "hjgraph/finite_horizon.hpp"
#include "hjgraph/graph.hpp"
#include "hjgraph/long_time.hpp"
#include "hjgraph/policy.hpp"
#include "hjgraph/problem.hpp"
#include "hjgraph/random_instance.hpp"
#include "hjgraph/runge_kutta.hpp"
#include "hjgraph/simulation.hpp"
#include "hjgraph/stationary.hpp"
#include "hjgraph/validation.hpp"
