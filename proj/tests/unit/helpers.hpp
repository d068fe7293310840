#pragma once

#include <string>

#include "otto/app/config.hpp"

namespace otto::test {

inline CycleParams preset(const std::string& name) {
  return app::load_config(app::preset_path(name)).params;
}

inline double max_abs(const Mat5& a, const Mat5& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace otto::test
