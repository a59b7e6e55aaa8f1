// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#ifndef SECMIMO_CONFIG_HPP
#define SECMIMO_CONFIG_HPP

#include <optional>
#include <string>

#include "secmimo/types.hpp"

namespace secmimo {

/// Immutable, fully validated system description shared by every engine.
///
/// Instances only exist through validate_config() or the JSON loaders, so
/// holding a ValidatedConfig implies every structural invariant has been
/// checked. Safe to share across threads without synchronization.
class ValidatedConfig {
 public:
  const SystemDims& dims() const { return dims_; }
  const HwiParams& hwi() const { return hwi_; }
  const PilotSchedule& schedule() const { return sched_; }
  const PowerAllocation& power() const { return pow_; }
  const PathLossProfile& path_loss() const { return pl_; }

  /// Precoder-design slot; defaults to the first data slot b_train + 1.
  std::size_t t0() const { return t0_; }
  /// AN dimensions per group, n_bs/m_groups - k_users (>= 0 after validation).
  std::size_t an_dims() const { return static_cast<std::size_t>(dims_.an_dims() > 0 ? dims_.an_dims() : 0); }
  bool an_enabled() const { return pow_.phi_split < 1.0; }

  friend ValidatedConfig validate_config(SystemDims, HwiParams, PilotSchedule,
                                         PowerAllocation, PathLossProfile,
                                         std::optional<std::size_t>);

 private:
  ValidatedConfig() = default;
  SystemDims dims_;
  HwiParams hwi_;
  PilotSchedule sched_;
  PowerAllocation pow_;
  PathLossProfile pl_;
  std::size_t t0_ = 0;
};

/// Checks every type invariant and returns the immutable configuration.
/// Throws ConfigError describing the first violated constraint.
ValidatedConfig validate_config(SystemDims dims, HwiParams hwi, PilotSchedule sched,
                                PowerAllocation pow, PathLossProfile pl,
                                std::optional<std::size_t> t0 = std::nullopt);

/// Round-robin user assignment with equal sub-phase lengths b_train/b_o and
/// scaled-DFT pilot columns (every entry of magnitude sqrt(p_tau)).
/// Requires b_o | b_train and b_o | k_users.
PilotSchedule build_pilot_schedule(std::size_t b_train, std::size_t b_o,
                                   std::size_t k_users, double p_tau);

/// p = phi*P/K and q = (1-phi)*P/L with L = n_bs/m_groups - k_users; q = 0 at phi = 1.
PowerAllocation derived_powers(double p_total, double phi_split, const SystemDims& dims);

/// Builds a validated configuration from a JSON document (see docs/config_schema.md).
/// Power and noise floors are given in dB relative to the unit thermal noise,
/// phase deviations in degrees; conversion happens here and nowhere else.
ValidatedConfig config_from_json(const std::string& json_text);

/// Serializes the resolved configuration (linear units echoed alongside the
/// ingestion-boundary dB/degree fields) for run manifests.
std::string config_to_json(const ValidatedConfig& cfg);

/// FNV-1a hash of the canonical JSON echo; used to tag result tables.
std::uint64_t config_hash(const ValidatedConfig& cfg);

}  // namespace secmimo

#endif  // SECMIMO_CONFIG_HPP
