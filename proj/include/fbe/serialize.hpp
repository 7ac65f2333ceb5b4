#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "fbe/binary_code.hpp"
#include "fbe/projection.hpp"
#include "fbe/projector.hpp"

namespace fbe {

// All multi-byte integers and floats are little-endian.
//
// Embedder ("FBE1"): magic, u32 N, u32 M, u64 seed, M f64 seed-vector
// entries, ceil(N/8) bytes of sign bits (bit i = 1 means +1, LSB first).
// The permutation is regenerated from the seed on load.
void write_embedder(std::ostream& out, const Embedder& embedder);
Embedder read_embedder(std::istream& in);

// Code: u32 M, then ceil(M/8) bytes, LSB-first within each byte.
void write_code(std::ostream& out, const BinaryCode& code);
BinaryCode read_code(std::istream& in);

// Code batch ("FBC1"): magic, u32 count, then `count` codes as above.
void write_codes(std::ostream& out, const std::vector<BinaryCode>& codes);
std::vector<BinaryCode> read_codes(std::istream& in);

// Projector file: u8 kind tag (Method value) followed by the payload.
//   lsh      u32 N, u32 M, u64 seed
//   cbe      u32 N, u32 M, u64 seed, u8 sign_flips
//   bp       u32 N, u32 M, u32 n1, u32 m1, u64 seed
//   proposed the "FBE1" embedder container
// Baselines are regenerated from their seed, so only seeded projectors can be written.
void write_projector(std::ostream& out, const BinaryProjector& projector);
std::unique_ptr<BinaryProjector> read_projector(std::istream& in);

// Batch of real vectors of a common dimension, stored row-major.
struct VectorBatch {
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t count() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

// Dense ("FBV1"): magic, u32 count, u32 n, count*n f64 row-major.
void write_vectors_dense(std::ostream& out, const VectorBatch& batch);
// Sparse ("FBS1"): magic, u32 count, u32 n, then per row u32 nnz and nnz
// (u32 index, f64 value) pairs. Zero entries are omitted.
void write_vectors_sparse(std::ostream& out, const VectorBatch& batch);
// Reads either layout, detected by magic.
VectorBatch read_vectors(std::istream& in);

void save_vectors(const std::string& path, const VectorBatch& batch, bool sparse = false);
VectorBatch load_vectors(const std::string& path);

}  // namespace fbe
