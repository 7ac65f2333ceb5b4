#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "fbe/binary_code.hpp"

namespace fbe {

// Embedding methods. The numeric values are the kind tags used in projector files.
enum class Method : std::uint8_t { lsh = 0, cbe = 1, bp = 2, proposed = 3 };

std::string_view method_name(Method method);
Method parse_method(std::string_view name);

// Row-major dense matrix, used for explicit oracles and small projections.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::vector<double> multiply(std::span<const double> x) const;
};

// Common surface of every embedding method: a linear map R^N -> R^M followed
// by the sign function.
class BinaryProjector {
 public:
  virtual ~BinaryProjector() = default;

  virtual Method method() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t code_bits() const = 0;

  // Real-valued projection before taking signs.
  virtual std::vector<double> project(std::span<const double> x) const = 0;

  virtual BinaryCode embed(std::span<const double> x) const {
    const auto values = project(x);
    return BinaryCode::from_values(values);
  }
};

// Builds a projector of the given method with all randomness drawn from `seed`.
std::unique_ptr<BinaryProjector> make_projector(Method method, std::size_t n, std::size_t m,
                                                std::uint64_t seed);

}  // namespace fbe
