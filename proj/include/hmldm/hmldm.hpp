#pragma once

// Umbrella header for the hybrid-membership latent distance model library.

#include "hmldm/checkpoint.hpp"
#include "hmldm/errors.hpp"
#include "hmldm/graph.hpp"
#include "hmldm/metrics.hpp"
#include "hmldm/model.hpp"
#include "hmldm/reorder.hpp"
#include "hmldm/rng.hpp"
#include "hmldm/split.hpp"
#include "hmldm/synthetic.hpp"
#include "hmldm/train.hpp"

namespace hmldm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hmldm
