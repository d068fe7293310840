#include "otto/cycle.hpp"

#include "otto/errors.hpp"

namespace otto {

void CycleParams::validate() const {
  medium.validate();
  cold.validate();
  hot.validate();
  compression.validate();
  expansion.validate();
  if (models.adiabat && (compression.schedule == Schedule::Linear ||
                         expansion.schedule == Schedule::Linear)) {
    throw InvalidParameter("approximate adiabat classes need the constant-mu schedule");
  }
}

}  // namespace otto
