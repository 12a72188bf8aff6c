#include "qmanifold/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace qmfd {

static_assert(std::endian::native == std::endian::little,
              "binary coefficient records are little-endian; add byte swaps "
              "before enabling big-endian builds");

namespace {
constexpr std::uint32_t kMagic = 0x46434d51u;  // "QMCF"
constexpr std::uint32_t kVersion = 1u;
}  // namespace

nlohmann::json to_json(const SchwartzFn& f) {
  std::vector<double> flat;
  flat.reserve(2 * f.size());
  for (const Complex& c : f.coeffs()) {
    flat.push_back(c.real());
    flat.push_back(c.imag());
  }
  return nlohmann::json{{"dim", f.dim()}, {"degree", f.degree()}, {"coeffs", flat}};
}

SchwartzFn schwartz_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  const int degree = j.at("degree").get<int>();
  const auto flat = j.at("coeffs").get<std::vector<double>>();
  if (flat.size() % 2 != 0) throw Error("schwartz_from_json: odd coefficient list");
  std::vector<Complex> coeffs(flat.size() / 2);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] = Complex(flat[2 * i], flat[2 * i + 1]);
  }
  return SchwartzFn(dim, degree, std::move(coeffs));
}

void write_binary(const SchwartzFn& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_binary: cannot open '" + path + "'");
  const std::uint32_t header[4] = {kMagic, kVersion, static_cast<std::uint32_t>(f.dim()),
                                   static_cast<std::uint32_t>(f.degree())};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (const Complex& c : f.coeffs()) {
    const double pair[2] = {c.real(), c.imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof(pair));
  }
  if (!out) throw Error("write_binary: write to '" + path + "' failed");
}

SchwartzFn read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_binary: cannot open '" + path + "'");
  std::uint32_t header[4];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || header[0] != kMagic) throw Error("read_binary: bad magic in '" + path + "'");
  if (header[1] != kVersion) throw Error("read_binary: unsupported record version");
  const int dim = static_cast<int>(header[2]);
  const int degree = static_cast<int>(header[3]);
  std::size_t count = 1;
  for (int i = 0; i < dim; ++i) count *= static_cast<std::size_t>(degree) + 1;
  std::vector<Complex> coeffs(count);
  for (auto& c : coeffs) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof(pair));
    c = Complex(pair[0], pair[1]);
  }
  if (!in) throw Error("read_binary: truncated record in '" + path + "'");
  return SchwartzFn(dim, degree, std::move(coeffs));
}

}  // namespace qmfd
