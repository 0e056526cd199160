#pragma once

#include "hotent/polaron.hpp"
#include "hotent/qoperator.hpp"

namespace hotent {

/// rho = u^dag rho~ u, re-Hermitized. Throws TruncationWarning when the map
/// leaks more than PolaronMap::kLeakageLimit out of the truncated space.
DensityState to_local_basis(const DensityState& state_tilde, const PolaronMap& map);
/// rho~ = u rho u^dag
DensityState to_polaron_frame(const DensityState& state, const PolaronMap& map);

/// Trace over the ancilla, keeping (R1, R2).
DensityState resonator_state(const DensityState& state);

/// log2 of the trace norm of the partial transpose. Never negative.
double log_negativity(const DensityState& two_mode, Site site = Site::R2);
double log_negativity(const Matrix& rho, int n1, int n2, Site site = Site::R2);

} // namespace hotent
