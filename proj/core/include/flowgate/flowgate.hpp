#pragma once

#include "flowgate/dataio.hpp"
#include "flowgate/importance.hpp"
#include "flowgate/learners.hpp"
#include "flowgate/matrix.hpp"
#include "flowgate/metrics.hpp"
#include "flowgate/parallel.hpp"
#include "flowgate/preprocess.hpp"
#include "flowgate/synth.hpp"
#include "flowgate/tree.hpp"

namespace flowgate {
inline constexpr const char* kVersion = "0.1.0";
}
