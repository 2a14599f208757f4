#pragma once

#include <ostream>

#include "syncnet/sim.hpp"

namespace syncnet {

/// Self-contained SVG line plot of the outputs (and the tracked average,
/// when present) against time.
void write_svg(const Trace& trace, std::ostream& os, int width = 800, int height = 400);

}  // namespace syncnet
