#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mval/harness.hpp"

namespace mval {

// Self-contained SVG line chart: axes with ticks, one polyline per method in order of
// first appearance, and a legend. Throws on an empty curve list.
std::string render_svg(const std::vector<CurvePoint>& curve, const std::string& title = "");
void emit_svg(const std::vector<CurvePoint>& curve, const std::filesystem::path& path,
              const std::string& title = "");

}  // namespace mval
