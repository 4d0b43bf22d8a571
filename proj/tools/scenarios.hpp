#pragma once

#include <vector>

#include "config.hpp"

namespace decolab::cli {

/// Registry of every runnable scenario, in listing order.
const std::vector<ScenarioDef>& scenarios();

}  // namespace decolab::cli
