#include "fbe/projector.hpp"

#include <string>

#include "fbe/baselines.hpp"
#include "fbe/errors.hpp"
#include "fbe/projection.hpp"

namespace fbe {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::lsh:
      return "lsh";
    case Method::cbe:
      return "cbe";
    case Method::bp:
      return "bp";
    case Method::proposed:
      return "proposed";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "lsh") return Method::lsh;
  if (name == "cbe") return Method::cbe;
  if (name == "bp") return Method::bp;
  if (name == "proposed") return Method::proposed;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols) throw ShapeError("matrix-vector product: length mismatch");
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = data.data() + r * cols;
    double acc0 = 0.0;
    double acc1 = 0.0;
    double acc2 = 0.0;
    double acc3 = 0.0;
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      acc0 += row[c] * x[c];
      acc1 += row[c + 1] * x[c + 1];
      acc2 += row[c + 2] * x[c + 2];
      acc3 += row[c + 3] * x[c + 3];
    }
    for (; c < cols; ++c) acc0 += row[c] * x[c];
    out[r] = (acc0 + acc1) + (acc2 + acc3);
  }
  return out;
}

std::unique_ptr<BinaryProjector> make_projector(Method method, std::size_t n, std::size_t m,
                                                std::uint64_t seed) {
  switch (method) {
    case Method::lsh:
      return std::make_unique<LshProjector>(n, m, seed);
    case Method::cbe:
      return std::make_unique<CbeProjector>(n, m, seed);
    case Method::bp:
      return std::make_unique<BpProjector>(n, m, seed);
    case Method::proposed:
      return std::make_unique<Embedder>(Embedder::create(n, m, seed));
  }
  throw ConfigError("unknown method");
}

}  // namespace fbe
