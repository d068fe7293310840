#pragma once

#include <optional>
#include <string_view>

#include "otto/core_model.hpp"

namespace otto {

/// Closed-form sudden adiabat families.
enum class AdiabatClass { SuddenGeneric, Class1, Class2, Class3a, Class3b };
/// Short-time truncations of the isochore map.
enum class IsochoreOrder { FrozenRotation, FirstOrder, SecondOrder };

std::string_view to_string(AdiabatClass c);
std::string_view to_string(IsochoreOrder o);

/// Which propagator each segment uses; an empty optional selects the exact map.
struct PropagatorModels {
  std::optional<AdiabatClass> adiabat;
  std::optional<IsochoreOrder> cold;
  std::optional<IsochoreOrder> hot;

  bool exact() const { return !adiabat && !cold && !hot; }
};

/// Full parameter set of one four-stroke cycle.
struct CycleParams {
  WorkingMedium medium;
  BathSegment cold;
  BathSegment hot;
  AdiabatSegment compression;  // B -> C, omega_c -> omega_h
  AdiabatSegment expansion;    // D -> A, omega_h -> omega_c
  PropagatorModels models;

  void validate() const;
  double cycle_time() const {
    return cold.tau + compression.tau + hot.tau + expansion.tau;
  }
};

}  // namespace otto
