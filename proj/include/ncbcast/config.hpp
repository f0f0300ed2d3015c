#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

#include "ncbcast/model.hpp"

namespace ncbcast {

// Flat key=value configuration. Recognized keys:
//   M, N, R, n, h, g, n_ack, ack_mode (non_interfering|interfering),
//   strict_f_gate (true|false),
//   pe, pe_ack, t_rt            (applied to every receiver)
//   pe[j], pe_ack[j], t_rt[j]   (per-receiver, j = 1..N)
// Lines starting with '#' and blank lines are ignored.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap load_config_file(const std::string& path);

/// Applies a single "key=value" override (CLI flag form).
void apply_override(ConfigMap& cfg, const std::string& key_eq_value);

SystemParams params_from_config(const ConfigMap& cfg);

/// Canonical one-line rendering of the parameters, for hashing and logs.
std::string canonical_config_string(const SystemParams& p);

/// FNV-1a hash of the canonical rendering.
std::uint64_t config_hash(const SystemParams& p);

} // namespace ncbcast
