#pragma once

#include "probesim/autonomy.hpp"
#include "probesim/batch.hpp"
#include "probesim/control.hpp"
#include "probesim/errors.hpp"
#include "probesim/estimation.hpp"
#include "probesim/geometry.hpp"
#include "probesim/io.hpp"
#include "probesim/metrics.hpp"
#include "probesim/report.hpp"
#include "probesim/rng.hpp"
#include "probesim/scenario.hpp"
#include "probesim/sensing.hpp"
#include "probesim/terrain.hpp"
#include "probesim/vehicle.hpp"
#include "probesim/world.hpp"
