#include "glvortex/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "glvortex/error.hpp"

namespace glvortex {

namespace {

void put_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw Error("snapshot: truncated data");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

std::string header_value(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw Error("snapshot: missing header line " + key);
  const std::string prefix = key + "=";
  if (line.compare(0, prefix.size(), prefix) != 0) throw Error("snapshot: expected " + prefix + ", got " + line);
  return line.substr(prefix.size());
}

}  // namespace

void write_snapshot(std::ostream& out, const MultiField& psi, double epsilon) {
  char eps[64];
  if (std::isnan(epsilon)) {
    std::snprintf(eps, sizeof eps, "nan");
  } else {
    std::snprintf(eps, sizeof eps, "%.17g", epsilon);
  }
  out << "glvortex-field v1\n"
      << "n_cells=" << psi.grid().n_cells() << "\n"
      << "n_components=" << psi.n() << "\n"
      << "epsilon=" << eps << "\n";
  for (int j = 0; j < psi.n(); ++j) {
    const auto re = psi.plane(2 * j);
    const auto im = psi.plane(2 * j + 1);
    for (std::size_t p = 0; p < psi.stride(); ++p) {
      put_le(out, re[p]);
      put_le(out, im[p]);
    }
  }
  if (!out) throw Error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const MultiField& psi, double epsilon) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("snapshot: cannot open " + path.string());
  write_snapshot(out, psi, epsilon);
}

Snapshot read_snapshot(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic) || magic != "glvortex-field v1") throw Error("snapshot: bad magic line");
  const int n_cells = std::stoi(header_value(in, "n_cells"));
  const int n = std::stoi(header_value(in, "n_components"));
  const std::string eps_text = header_value(in, "epsilon");
  const double epsilon = eps_text == "nan" ? std::nan("") : std::stod(eps_text);
  MultiField psi(Grid(n_cells), n);
  for (int j = 0; j < n; ++j) {
    auto re = psi.plane(2 * j);
    auto im = psi.plane(2 * j + 1);
    for (std::size_t p = 0; p < psi.stride(); ++p) {
      re[p] = get_le(in);
      im[p] = get_le(in);
    }
  }
  return {std::move(psi), epsilon};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("snapshot: cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace glvortex
