#include "fbe/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "fbe/baselines.hpp"
#include "fbe/errors.hpp"
#include "fbe/rng.hpp"

namespace fbe {

namespace {

constexpr std::array<char, 4> kEmbedderMagic{'F', 'B', 'E', '1'};
constexpr std::array<char, 4> kCodesMagic{'F', 'B', 'C', '1'};
constexpr std::array<char, 4> kDenseMagic{'F', 'B', 'V', '1'};
constexpr std::array<char, 4> kSparseMagic{'F', 'B', 'S', '1'};

void put_bytes(std::ostream& out, const void* data, std::size_t len) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
  if (!out) throw FormatError("write failed");
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  put_bytes(out, bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double value) { put_le(out, std::bit_cast<std::uint64_t>(value)); }

void get_bytes(std::istream& in, void* data, std::size_t len) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len) throw FormatError("truncated input");
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  get_bytes(in, bytes.data(), bytes.size());
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

std::uint32_t to_u32(std::size_t v, const char* what) {
  if (v > UINT32_MAX) throw FormatError(std::string(what) + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

void expect_magic(std::istream& in, const std::array<char, 4>& magic) {
  std::array<char, 4> got{};
  get_bytes(in, got.data(), got.size());
  if (got != magic) throw FormatError("bad magic, expected " + std::string(magic.data(), 4));
}

void put_bits(std::ostream& out, const std::vector<bool>& bits) {
  std::vector<unsigned char> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<unsigned char>(1U << (i % 8));
  }
  put_bytes(out, bytes.data(), bytes.size());
}

std::vector<bool> get_bits(std::istream& in, std::size_t count) {
  std::vector<unsigned char> bytes((count + 7) / 8);
  get_bytes(in, bytes.data(), bytes.size());
  std::vector<bool> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = ((bytes[i / 8] >> (i % 8)) & 1U) != 0;
  for (std::size_t i = count; i < bytes.size() * 8; ++i) {
    if (((bytes[i / 8] >> (i % 8)) & 1U) != 0) throw FormatError("non-zero padding bits");
  }
  return bits;
}

}  // namespace

// ---------------------------------------------------------------------------
// Embedder

void write_embedder(std::ostream& out, const Embedder& embedder) {
  const Randomizer regenerated(embedder.padded_dim(), derive_seed(embedder.seed(), 0));
  const auto& r = embedder.randomizer();
  if (!std::equal(r.permutation().begin(), r.permutation().end(), regenerated.permutation().begin()) ||
      !std::equal(r.signs().begin(), r.signs().end(), regenerated.signs().begin())) {
    throw ConfigError("embedder randomizer is not reproducible from its seed");
  }
  put_bytes(out, kEmbedderMagic.data(), 4);
  put_le(out, to_u32(embedder.input_dim(), "N"));
  put_le(out, to_u32(embedder.code_bits(), "M"));
  put_le(out, embedder.seed());
  for (double d : embedder.circulant().seed_vector()) put_f64(out, d);
  std::vector<bool> bits(embedder.input_dim());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = r.signs()[i] > 0;
  put_bits(out, bits);
}

Embedder read_embedder(std::istream& in) {
  expect_magic(in, kEmbedderMagic);
  const std::size_t n = get_le<std::uint32_t>(in);
  const std::size_t m = get_le<std::uint32_t>(in);
  const auto seed = get_le<std::uint64_t>(in);
  if (n == 0 || m == 0 || m > n) throw FormatError("invalid embedder dimensions");
  std::vector<double> d(m);
  for (auto& v : d) v = get_f64(in);
  const auto bits = get_bits(in, n);
  Randomizer randomizer(padded_length(n, m), derive_seed(seed, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i] != (randomizer.signs()[i] > 0)) {
      throw FormatError("stored sign bits do not match the seed");
    }
  }
  return Embedder(std::move(randomizer), CirculantProjector(std::move(d), derive_seed(seed, 1)), n, seed);
}

// ---------------------------------------------------------------------------
// Codes

void write_code(std::ostream& out, const BinaryCode& code) {
  put_le(out, to_u32(code.size(), "code length"));
  std::vector<bool> bits(code.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = code.bit(i);
  put_bits(out, bits);
}

BinaryCode read_code(std::istream& in) {
  const std::size_t m = get_le<std::uint32_t>(in);
  const auto bits = get_bits(in, m);
  BinaryCode code(m);
  for (std::size_t i = 0; i < m; ++i) code.set(i, bits[i]);
  return code;
}

void write_codes(std::ostream& out, const std::vector<BinaryCode>& codes) {
  put_bytes(out, kCodesMagic.data(), 4);
  put_le(out, to_u32(codes.size(), "code count"));
  for (const auto& c : codes) write_code(out, c);
}

std::vector<BinaryCode> read_codes(std::istream& in) {
  expect_magic(in, kCodesMagic);
  const std::size_t count = get_le<std::uint32_t>(in);
  std::vector<BinaryCode> codes;
  codes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) codes.push_back(read_code(in));
  return codes;
}

// ---------------------------------------------------------------------------
// Projectors

void write_projector(std::ostream& out, const BinaryProjector& projector) {
  const auto tag = static_cast<std::uint8_t>(projector.method());
  switch (projector.method()) {
    case Method::lsh: {
      const auto& p = dynamic_cast<const LshProjector&>(projector);
      put_le(out, tag);
      put_le(out, to_u32(p.input_dim(), "N"));
      put_le(out, to_u32(p.code_bits(), "M"));
      put_le(out, p.seed());
      return;
    }
    case Method::cbe: {
      const auto& p = dynamic_cast<const CbeProjector&>(projector);
      if (!p.seeded()) throw ConfigError("CBE projector was not generated from a seed");
      put_le(out, tag);
      put_le(out, to_u32(p.input_dim(), "N"));
      put_le(out, to_u32(p.code_bits(), "M"));
      put_le(out, p.seed());
      put_le(out, static_cast<std::uint8_t>(p.has_sign_flips() ? 1 : 0));
      return;
    }
    case Method::bp: {
      const auto& p = dynamic_cast<const BpProjector&>(projector);
      if (!p.seeded()) throw ConfigError("BP projector was not generated from a seed");
      put_le(out, tag);
      put_le(out, to_u32(p.input_dim(), "N"));
      put_le(out, to_u32(p.code_bits(), "M"));
      put_le(out, to_u32(p.input_factors().rows, "n1"));
      put_le(out, to_u32(p.output_factors().rows, "m1"));
      put_le(out, p.seed());
      return;
    }
    case Method::proposed:
      put_le(out, tag);
      write_embedder(out, dynamic_cast<const Embedder&>(projector));
      return;
  }
  throw ConfigError("unknown projector kind");
}

std::unique_ptr<BinaryProjector> read_projector(std::istream& in) {
  const auto tag = get_le<std::uint8_t>(in);
  switch (tag) {
    case static_cast<std::uint8_t>(Method::lsh): {
      const std::size_t n = get_le<std::uint32_t>(in);
      const std::size_t m = get_le<std::uint32_t>(in);
      const auto seed = get_le<std::uint64_t>(in);
      return std::make_unique<LshProjector>(n, m, seed);
    }
    case static_cast<std::uint8_t>(Method::cbe): {
      const std::size_t n = get_le<std::uint32_t>(in);
      const std::size_t m = get_le<std::uint32_t>(in);
      const auto seed = get_le<std::uint64_t>(in);
      const auto flips = get_le<std::uint8_t>(in);
      if (flips > 1) throw FormatError("invalid CBE flip flag");
      return std::make_unique<CbeProjector>(n, m, seed, flips == 1);
    }
    case static_cast<std::uint8_t>(Method::bp): {
      const std::size_t n = get_le<std::uint32_t>(in);
      const std::size_t m = get_le<std::uint32_t>(in);
      const std::size_t n1 = get_le<std::uint32_t>(in);
      const std::size_t m1 = get_le<std::uint32_t>(in);
      const auto seed = get_le<std::uint64_t>(in);
      if (n1 == 0 || m1 == 0 || n % n1 != 0 || m % m1 != 0) throw FormatError("invalid BP factorization");
      return std::make_unique<BpProjector>(Factorization{n1, n / n1}, Factorization{m1, m / m1}, seed);
    }
    case static_cast<std::uint8_t>(Method::proposed):
      return std::make_unique<Embedder>(read_embedder(in));
    default:
      throw FormatError("unknown projector kind tag " + std::to_string(tag));
  }
}

// ---------------------------------------------------------------------------
// Vector batches

void write_vectors_dense(std::ostream& out, const VectorBatch& batch) {
  put_bytes(out, kDenseMagic.data(), 4);
  put_le(out, to_u32(batch.count(), "count"));
  put_le(out, to_u32(batch.dim, "n"));
  for (double v : batch.values) put_f64(out, v);
}

void write_vectors_sparse(std::ostream& out, const VectorBatch& batch) {
  put_bytes(out, kSparseMagic.data(), 4);
  put_le(out, to_u32(batch.count(), "count"));
  put_le(out, to_u32(batch.dim, "n"));
  for (std::size_t r = 0; r < batch.count(); ++r) {
    const auto row = batch.row(r);
    std::uint32_t nnz = 0;
    for (double v : row) nnz += v != 0.0 ? 1 : 0;
    put_le(out, nnz);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0.0) continue;
      put_le(out, static_cast<std::uint32_t>(i));
      put_f64(out, row[i]);
    }
  }
}

VectorBatch read_vectors(std::istream& in) {
  std::array<char, 4> magic{};
  get_bytes(in, magic.data(), magic.size());
  if (magic != kDenseMagic && magic != kSparseMagic) throw FormatError("bad magic for vector batch");
  const std::size_t count = get_le<std::uint32_t>(in);
  VectorBatch batch;
  batch.dim = get_le<std::uint32_t>(in);
  if (count > 0 && batch.dim == 0) throw FormatError("vector batch with zero dimension");
  batch.values.assign(count * batch.dim, 0.0);
  if (magic == kDenseMagic) {
    for (auto& v : batch.values) v = get_f64(in);
    return batch;
  }
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t nnz = get_le<std::uint32_t>(in);
    if (nnz > batch.dim) throw FormatError("sparse row has more entries than the dimension");
    for (std::size_t k = 0; k < nnz; ++k) {
      const std::size_t index = get_le<std::uint32_t>(in);
      if (index >= batch.dim) throw FormatError("sparse index out of range");
      batch.values[r * batch.dim + index] = get_f64(in);
    }
  }
  return batch;
}

void save_vectors(const std::string& path, const VectorBatch& batch, bool sparse) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  if (sparse) {
    write_vectors_sparse(out, batch);
  } else {
    write_vectors_dense(out, batch);
  }
}

VectorBatch load_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_vectors(in);
}

}  // namespace fbe
