#pragma once

#include "stereorange/csv.hpp"
#include "stereorange/error_budget.hpp"
#include "stereorange/geometry.hpp"
#include "stereorange/oracle.hpp"
#include "stereorange/projection.hpp"
#include "stereorange/scenario.hpp"
#include "stereorange/svg.hpp"
#include "stereorange/version.hpp"
