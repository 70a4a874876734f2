// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace fockdecay {

/// Angles of the two-flavour unitary relating flavour operators a_j to the
/// propagation operators c_j. `chi` is a global phase.
struct MixingParams {
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double chi = 0.0;

  /// Same angles reduced to [0, 2pi).
  MixingParams canonical() const;

  bool operator==(const MixingParams&) const = default;
};

}  // namespace fockdecay
