#pragma once

#include <string>
#include <vector>

#include "speciso/bounds.hpp"

namespace speciso {

// Self-contained SVG figure: achieved lambda_k |Sigma|^{2/n} against every
// evaluated bound plus the Weyl line, one series each. The y axis switches
// to log scale when the spread exceeds 1e3 (the Euclidean constant makes
// linear axes unreadable).
std::string bound_plot_svg(const BoundReport& report);

// Shrinking-sphere family: the constant normalized lambda_2 column next to
// the collapsing isoperimetric ratio.
std::string torus_plot_svg(const std::vector<TorusRow>& rows);

}  // namespace speciso
