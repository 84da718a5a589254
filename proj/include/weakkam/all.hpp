#pragma once

#include "weakkam/aubry.hpp"
#include "weakkam/bound.hpp"
#include "weakkam/calibration.hpp"
#include "weakkam/digraph.hpp"
#include "weakkam/error.hpp"
#include "weakkam/flow.hpp"
#include "weakkam/geometry.hpp"
#include "weakkam/graph.hpp"
#include "weakkam/mather.hpp"
#include "weakkam/mean_cycle.hpp"
#include "weakkam/model.hpp"
#include "weakkam/parallel.hpp"
#include "weakkam/reference.hpp"
#include "weakkam/sweep.hpp"
#include "weakkam/weakkam.hpp"
