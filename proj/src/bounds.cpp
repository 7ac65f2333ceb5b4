#include "fbe/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbe/errors.hpp"

namespace fbe {

namespace {

// Nearest-ish double of a non-negative rational without forming huge floats.
double to_double(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::msb;
  using boost::multiprecision::numerator;
  BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;
  const long shift = 64L - (static_cast<long>(msb(num)) - static_cast<long>(msb(den)));
  const BigInt q = shift >= 0 ? BigInt(num << shift) / den : num / BigInt(den << -shift);
  const double value = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
  return negative ? -value : value;
}

void require_divides(std::size_t n, std::size_t m) {
  if (m == 0 || n < m || n % m != 0) throw DomainError("M must divide N");
}

// C(M, f) C(N/M, 2)^f C(N-2f, K-2f) / C(N, K). K < 2f gives 0.
Rational collision_union_term(std::size_t n, std::size_t m, std::size_t k, std::size_t f) {
  if (k < 2 * f) return Rational(0);
  const BigInt g = binomial(n / m, 2);
  BigInt numer = binomial(m, f) * boost::multiprecision::pow(g, static_cast<unsigned>(f)) *
                 binomial(n - 2 * f, k - 2 * f);
  return Rational(numer, binomial(n, k));
}

ExactBound clamp_complement(const Rational& term) {
  ExactBound b;
  b.exact = term >= 1 ? Rational(0) : Rational(1 - term);
  b.value = to_double(b.exact);
  return b;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

std::string ExactBound::fraction() const {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return numerator(exact).str() + "/" + denominator(exact).str();
}

double theorem1_lower_bound(std::size_t k, std::size_t m, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("theorem 1 bound requires 0 < delta < 1");
  if (k == 0 || m == 0) throw DomainError("K and M must be positive");
  const double exponent = delta * delta / 16.0 - delta * delta * delta / 48.0;
  const double log_term = std::numbers::ln2 + static_cast<double>(k) * std::log(12.0 / delta) -
                          exponent * static_cast<double>(m);
  if (log_term >= 0.0) return 0.0;
  return clamp01(-std::expm1(log_term));
}

ExactBound lemma1_exact_bound(std::size_t n, std::size_t m, std::size_t k, std::size_t f) {
  require_divides(n, m);
  if (f < 1 || 2 * f > k || k > n) throw DomainError("lemma 1 requires 1 <= f <= K/2 and K <= N");
  return clamp_complement(collision_union_term(n, m, k, f));
}

double lemma1_stirling_bound(std::size_t m, std::size_t k, std::size_t f) {
  if (f < 1 || m == 0) throw DomainError("Stirling bound requires f >= 1 and M > 0");
  if (k == 0) return 1.0;
  const double fd = static_cast<double>(f);
  const double ratio = std::numbers::e * static_cast<double>(k) * static_cast<double>(k) /
                       (2.0 * static_cast<double>(m) * fd);
  const double log_term = fd * std::log(ratio) - 0.5 * std::log(2.0 * std::numbers::pi * fd);
  if (log_term >= 0.0) return 0.0;
  return clamp01(-std::expm1(log_term));
}

IsometryBound theorem2_bound(std::size_t n, std::size_t m, std::size_t k) {
  require_divides(n, m);
  if (k < 1 || k > n) throw DomainError("theorem 2 requires 1 <= K <= N");
  IsometryBound out;
  out.exact = clamp_complement(collision_union_term(n, m, k, 1));
  out.stirling = lemma1_stirling_bound(m, k, 1);
  return out;
}

std::vector<BoundPoint> theorem3_bound_curve(std::size_t n, std::size_t m, std::size_t k) {
  require_divides(n, m);
  if (k < 2 || k > n) throw DomainError("theorem 3 requires 2 <= K <= N");
  const auto g = binomial(n / m, 2).convert_to<std::uint64_t>();
  if (g == 0) throw DomainError("theorem 3 grid is degenerate when M == N");
  const double spacing = 2.0 * static_cast<double>(g) / static_cast<double>(k);

  std::vector<BoundPoint> curve;
  curve.reserve(k / 2);
  for (std::size_t f = 1; f <= k / 2; ++f) {
    BoundPoint p;
    p.delta = spacing * static_cast<double>(f - 1);
    const double f_back = p.delta * static_cast<double>(k) / (2.0 * static_cast<double>(g)) + 1.0;
    if (std::abs(f_back - std::round(f_back)) > 1e-9 || static_cast<std::size_t>(std::round(f_back)) != f) {
      throw DomainError("grid delta does not map back to an integer f");
    }
    p.f = f;
    p.exact = lemma1_exact_bound(n, m, k, f);
    p.stirling = lemma1_stirling_bound(m, k, f);
    p.theorem1 = (p.delta > 0.0 && p.delta < 1.0) ? theorem1_lower_bound(k, m, p.delta) : 0.0;
    // E_f grows with f, so any bound for a smaller f also bounds P(E_f).
    if (!curve.empty()) {
      const auto& prev = curve.back();
      if (prev.exact.exact > p.exact.exact) p.exact = prev.exact;
      p.stirling = std::max(p.stirling, prev.stirling);
    }
    curve.push_back(std::move(p));
  }
  return curve;
}

Rational CollisionTable::probability_fewer_than(std::size_t f) const {
  BigInt hits = 0;
  for (std::size_t c = 0; c < std::min(f, supports_with_collisions.size()); ++c) {
    hits += supports_with_collisions[c];
  }
  return Rational(hits, total);
}

CollisionTable enumerate_collision_oracle(std::size_t n, std::size_t m, std::size_t k) {
  require_divides(n, m);
  if (k < 1 || k > n) throw DomainError("enumeration requires 1 <= K <= N");
  CollisionTable table;
  table.n = n;
  table.m = m;
  table.k = k;
  table.total = binomial(n, k);
  if (table.total > CollisionTable::kMaxSubsets) throw SizeError("C(N, K) exceeds the enumeration cap");
  table.supports_with_collisions.assign(k / 2 + 1, 0);

  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::uint32_t> occupancy(m, 0);
  for (;;) {
    std::size_t colliding = 0;
    for (auto i : idx) {
      if (++occupancy[i % m] == 2) ++colliding;
    }
    for (auto i : idx) occupancy[i % m] = 0;
    ++table.supports_with_collisions[colliding];

    // Next k-subset in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return table;
}

}  // namespace fbe
