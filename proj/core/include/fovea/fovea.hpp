#pragma once

#include "fovea/bbox.hpp"
#include "fovea/bench.hpp"
#include "fovea/coco.hpp"
#include "fovea/dataset.hpp"
#include "fovea/eccentricity.hpp"
#include "fovea/error.hpp"
#include "fovea/eval.hpp"
#include "fovea/grid.hpp"
#include "fovea/image_io.hpp"
#include "fovea/manifest.hpp"
#include "fovea/raster.hpp"
