#pragma once

#include "toposim/inference.hpp"
#include "toposim/persistence.hpp"

#include <string>

namespace toposim {

/// Birth on x, death on y, diagonal reference, one color per dimension.
/// Essential classes sit on the death-cap line as open markers.
std::string diagram_svg(const PersistenceDiagram& pd, const std::string& title = "");

/// Three panels (H0, H1, H2) of mean total persistence against SNR on a
/// log axis.
std::string sweep_svg(const SweepResult& r);

/// One panel per dimension with a box per group over the bootstrap means.
std::string bootstrap_svg(const BootstrapResult& r, int max_dim = 1);

}  // namespace toposim
