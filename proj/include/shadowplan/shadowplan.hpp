#pragma once

#include "shadowplan/baselines.hpp"
#include "shadowplan/campaigns.hpp"
#include "shadowplan/centerline.hpp"
#include "shadowplan/config.hpp"
#include "shadowplan/csv.hpp"
#include "shadowplan/ekf.hpp"
#include "shadowplan/fitting.hpp"
#include "shadowplan/geometry.hpp"
#include "shadowplan/guidance.hpp"
#include "shadowplan/ifds.hpp"
#include "shadowplan/initial_path.hpp"
#include "shadowplan/metrics.hpp"
#include "shadowplan/mpc.hpp"
#include "shadowplan/plots.hpp"
#include "shadowplan/scenario.hpp"
#include "shadowplan/shadow_field.hpp"
#include "shadowplan/simulation.hpp"
