#pragma once

#include <string>

#include <json.hpp>

#include "qmanifold/schwartz_fn.hpp"

namespace qmfd {

/// JSON record {dim, degree, coeffs: [re, im, re, im, ...]} with the
/// coefficients in row-major multi-index order.
nlohmann::json to_json(const SchwartzFn& f);
SchwartzFn schwartz_from_json(const nlohmann::json& j);

/// Flat little-endian binary record; see docs/FORMATS.md.
void write_binary(const SchwartzFn& f, const std::string& path);
SchwartzFn read_binary(const std::string& path);

}  // namespace qmfd
