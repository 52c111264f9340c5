#pragma once

#include "poseonly/baseline.hpp"
#include "poseonly/error.hpp"
#include "poseonly/evaluation.hpp"
#include "poseonly/geometry.hpp"
#include "poseonly/io.hpp"
#include "poseonly/ligt.hpp"
#include "poseonly/parallel.hpp"
#include "poseonly/pose_adjust.hpp"
#include "poseonly/reconstruct.hpp"
#include "poseonly/scene_sim.hpp"
#include "poseonly/types.hpp"
