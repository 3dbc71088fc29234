#pragma once

#include <string>

#include "kspap/fields.hpp"

namespace kspap {

// Row-major grid values on the midpoint transform grid.
void write_grid_csv(const SpectralField& f, const std::string& path);
SpectralField read_grid_csv(const BoxDomain& domain, const std::string& path);

// Field descriptor {dim, side_lengths, modes, coefficients}; vector fields
// additionally carry "components" arrays.
std::string field_to_json(const SpectralField& f);
std::string field_to_json(const VectorSpectralField& f);
SpectralField field_from_json(const std::string& text);
VectorSpectralField vector_field_from_json(const std::string& text);

}  // namespace kspap
