#pragma once

#include <string>

#include "json.hpp"
#include "spectun/neck.hpp"
#include "spectun/warp.hpp"

namespace spectun {

/// Profile records are small JSON objects: a named family with its parameters,
/// or a sampled table rebuilt with monotone-cubic interpolation. Families:
///   {"family": "euclidean",      "radius": R}
///   {"family": "sphere",         "curvature": K>0}
///   {"family": "hyperbolic-cap", "radius": R, "curvature": K<0}
///   {"family": "cylinder",       "length": L}
///   {"family": "warped-circle",  "length": L, "amplitude": A}
///   {"family": "sampled", "name": ..., "domain": {...}, "r": [...], "phi": [...]}
/// with "domain" either {"kind":"interval","r_min":..,"r_max":..,"left":"pole"|
/// "boundary","right":...} or {"kind":"circle","length":..}. Unknown keys are
/// rejected (ConfigError), matching the strictness of the config files.
WarpProfile warp_from_json(const nlohmann::json& record);
WarpProfile load_warp(const std::string& path);

/// Sampled-table record of any profile (the only representation every warp
/// has); round-trips through warp_from_json with finite-order accuracy.
nlohmann::json warp_to_json(const WarpProfile& w, int samples = 513);
void save_warp(const WarpProfile& w, const std::string& path, int samples = 513);

/// Neck records: {"family": "canonical"} or
/// {"family": "sampled", "x": [...], "f": [...]} (values on [0, x_max]).
NeckProfile neck_from_json(const nlohmann::json& record);
NeckProfile load_neck(const std::string& path);

}  // namespace spectun
