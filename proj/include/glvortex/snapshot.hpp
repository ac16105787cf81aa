#pragma once

#include <filesystem>
#include <iosfwd>

#include "glvortex/multifield.hpp"

namespace glvortex {

// Field snapshot: four text header lines
//   glvortex-field v1
//   n_cells=<int>
//   n_components=<int>
//   epsilon=<float or nan>
// followed by little-endian float64 (re, im) pairs in row-major node order,
// one component after another.
struct Snapshot {
  MultiField field;
  double epsilon;
};

void write_snapshot(std::ostream& out, const MultiField& psi, double epsilon);
void write_snapshot(const std::filesystem::path& path, const MultiField& psi, double epsilon);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace glvortex
