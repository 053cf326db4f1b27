// Umbrella header for the whole library.

#pragma once

#include "occsort/assignment.hpp"
#include "occsort/geometry.hpp"
#include "occsort/metrics.hpp"
#include "occsort/motion.hpp"
#include "occsort/mot_io.hpp"
#include "occsort/pipeline.hpp"
#include "occsort/scenario.hpp"
#include "occsort/tracker.hpp"
