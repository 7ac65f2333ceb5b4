#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fbe/bench.hpp"
#include "fbe/bounds.hpp"
#include "fbe/errors.hpp"
#include "fbe/parallel.hpp"
#include "fbe/projection.hpp"
#include "fbe/report.hpp"
#include "fbe/rip.hpp"
#include "fbe/serialize.hpp"
#include "fbe/similarity.hpp"

namespace {

using namespace fbe;

// Bad flag values that CLI11 cannot see (sweep syntax, missing --out, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
  unsigned workers = default_workers();

  bool json() const { return format == "json"; }
};

void emit_text(const Global& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw FormatError("cannot open " + g.out + " for writing");
  f << text;
  if (!f) throw FormatError("write to " + g.out + " failed");
}

std::ofstream open_binary_out(const Global& g, const char* what) {
  if (g.out.empty() || g.out == "-") throw UsageError(std::string(what) + " writes a binary file; pass --out PATH");
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw FormatError("cannot open " + g.out + " for writing");
  return f;
}

std::unique_ptr<BinaryProjector> load_projector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_projector(in);
}

std::vector<BinaryCode> load_codes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_codes(in);
}

std::string bit_string(const BinaryCode& c) {
  std::string s(c.size(), '0');
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.bit(i)) s[i] = '1';
  return s;
}

// "a:b" -> a, 2a, 4a, ... up to b.
std::vector<std::size_t> doubling_sweep(const std::string& spec) {
  const auto colon = spec.find(':');
  std::size_t lo = 0, hi = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(spec);
    lo = std::stoull(spec.substr(0, colon));
    hi = std::stoull(spec.substr(colon + 1));
  } catch (const std::logic_error&) {
    throw UsageError("sweep must look like LO:HI, got '" + spec + "'");
  }
  if (lo == 0 || hi < lo) throw UsageError("sweep needs 0 < LO <= HI");
  std::vector<std::size_t> values;
  for (std::size_t v = lo; v <= hi; v *= 2) values.push_back(v);
  return values;
}

std::vector<double> default_thetas() {
  constexpr double pi = std::numbers::pi;
  return {pi / 8, pi / 4, pi / 2, 3 * pi / 4};
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string method = "proposed";
  std::size_t n = 0;
  std::size_t m = 0;
};

void run_gen(const Global& g, const GenArgs& a) {
  const auto projector = make_projector(parse_method(a.method), a.n, a.m, g.seed);
  auto f = open_binary_out(g, "gen");
  write_projector(f, *projector);
}

struct EmbedArgs {
  std::string projector;
  std::string input;
};

void run_embed(const Global& g, const EmbedArgs& a) {
  const auto projector = load_projector(a.projector);
  const auto batch = load_vectors(a.input);
  if (batch.count() > 0 && batch.dim != projector->input_dim()) {
    throw ShapeError("vectors have dimension " + std::to_string(batch.dim) + ", projector expects " +
                     std::to_string(projector->input_dim()));
  }
  std::vector<BinaryCode> codes(batch.count());
  parallel_for(codes.size(), g.workers, [&](std::size_t i) { codes[i] = projector->embed(batch.row(i)); });
  if (!g.out.empty() && g.out != "-") {
    auto f = open_binary_out(g, "embed");
    write_codes(f, codes);
    return;
  }
  Table t;
  t.columns = {"index", "bits"};
  for (std::size_t i = 0; i < codes.size(); ++i) t.add_row({std::uint64_t{i}, bit_string(codes[i])});
  emit_text(g, t.render(g.json()));
}

struct HammingArgs {
  std::string codes;
  std::string queries;
  std::size_t top_k = 0;
};

void run_hamming(const Global& g, const HammingArgs& a) {
  const auto items = load_codes(a.codes);
  const auto queries = a.queries.empty() ? items : load_codes(a.queries);
  Table t;
  if (a.top_k == 0) {
    t.columns = {"query", "item", "distance", "normalized"};
    for (std::size_t q = 0; q < queries.size(); ++q)
      for (std::size_t i = 0; i < items.size(); ++i)
        t.add_row({std::uint64_t{q}, std::uint64_t{i}, std::uint64_t{hamming_distance(queries[q], items[i])},
                   hamming_normalized(queries[q], items[i])});
    emit_text(g, t.render(g.json()));
    return;
  }
  t.columns = {"query", "rank", "item", "distance"};
  const std::size_t k = std::min(a.top_k, items.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::vector<std::pair<std::size_t, std::size_t>> scored(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) scored[i] = {hamming_distance(queries[q], items[i]), i};
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
    for (std::size_t r = 0; r < k; ++r)
      t.add_row({std::uint64_t{q}, std::uint64_t{r + 1}, std::uint64_t{scored[r].second},
                 std::uint64_t{scored[r].first}});
  }
  emit_text(g, t.render(g.json()));
}

struct RipArgs {
  std::size_t n = 4000;
  std::size_t m = 1000;
  std::size_t k = 25;
  std::size_t trials = 100000;
  std::string values = "binary01";
  std::string kind = "both";
  std::size_t bins = 50;
};

void run_rip(const Global& g, const RipArgs& a) {
  std::vector<MatrixKind> kinds;
  if (a.kind == "both") {
    kinds = {MatrixKind::gaussian, MatrixKind::proposed};
  } else {
    kinds = {parse_matrix_kind(a.kind)};
  }
  std::vector<RipEstimate> estimates;
  for (auto kind : kinds) {
    RipParams p;
    p.kind = kind;
    p.n = a.n;
    p.m = a.m;
    p.k = a.k;
    p.trials = a.trials;
    p.value_model = parse_value_model(a.values);
    p.rng_seed = g.seed;
    estimates.push_back(estimate_rip(p, g.workers));
  }
  // Probability that Phi R keeps the norm exactly; only defined when M | N.
  const bool divisible = a.m > 0 && a.n % a.m == 0;
  const double isometry = divisible ? theorem2_bound(a.n, a.m, a.k).exact.value : std::nan("");
  if (g.json()) {
    std::string text;
    for (const auto& e : estimates) {
      auto rec = nlohmann::ordered_json::parse(rip_json_record(e, a.bins));
      if (divisible) rec["isometry_bound"] = isometry;
      text += rec.dump() + "\n";
    }
    emit_text(g, text);
    return;
  }
  auto t = rip_summary_table(estimates);
  t.columns.push_back("isometry_bound");
  for (auto& row : t.rows) row.push_back(isometry);
  emit_text(g, t.to_csv());
}

struct BoundsArgs {
  std::size_t n = 4000;
  std::size_t m = 1000;
  std::size_t k = 100;
};

void run_bounds(const Global& g, const BoundsArgs& a) {
  emit_text(g, bound_curve_table(theorem3_bound_curve(a.n, a.m, a.k)).render(g.json()));
}

struct AngleArgs {
  std::string method = "lsh";
  std::size_t n = 64;
  std::size_t m = 1000;
  std::size_t replicates = 2000;
  std::size_t sparsity = 0;
  std::vector<double> thetas;
};

void run_angle(const Global& g, const AngleArgs& a) {
  CharikarParams p;
  p.method = parse_method(a.method);
  p.n = a.n;
  p.m = a.m;
  p.replicates = a.replicates;
  p.sparsity = a.sparsity;
  p.thetas = a.thetas.empty() ? default_thetas() : a.thetas;
  p.rng_seed = g.seed;
  emit_text(g, charikar_table(charikar_experiment(p, g.workers)).render(g.json()));
}

struct RetrievalArgs {
  std::vector<std::string> methods{"proposed", "lsh"};
  std::size_t n = 2048;
  std::vector<std::size_t> ms{64, 256, 1024};
  std::size_t corpus = 5000;
  std::size_t queries = 200;
  std::size_t top_k = 50;
  ClusterSpec clusters;
};

void run_retrieval(const Global& g, const RetrievalArgs& a) {
  Table t;
  t.columns = {"method", "m", "map_at_k", "exact_angle_map_at_k"};
  for (const auto& name : a.methods) {
    for (auto m : a.ms) {
      RetrievalParams p;
      p.method = parse_method(name);
      p.n = a.n;
      p.m = m;
      p.corpus_size = a.corpus;
      p.queries = a.queries;
      p.top_k = a.top_k;
      p.clusters = a.clusters;
      p.rng_seed = g.seed;
      const auto r = synthetic_retrieval(p, g.workers);
      t.add_row({name, std::uint64_t{m}, r.map_at_k, r.angle_map_at_k});
    }
  }
  emit_text(g, t.render(g.json()));
}

struct BenchArgs {
  std::vector<std::string> methods{"proposed"};
  std::size_t n = 1 << 14;
  std::size_t m = 1 << 8;
  std::string m_sweep;
  std::string n_sweep;
  std::size_t ratio = 0;
  std::size_t repetitions = 7;
  std::size_t warmup = 3;
};

void run_bench(const Global& g, const BenchArgs& a) {
  if (!a.n_sweep.empty() && a.ratio == 0) throw UsageError("--n-sweep needs --ratio N/M");
  if (!a.n_sweep.empty() && !a.m_sweep.empty()) throw UsageError("use either --m-sweep or --n-sweep");
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  if (!a.n_sweep.empty()) {
    for (auto n : doubling_sweep(a.n_sweep)) {
      if (n % a.ratio != 0) throw UsageError("--ratio must divide every N in the sweep");
      sizes.emplace_back(n, n / a.ratio);
    }
  } else if (!a.m_sweep.empty()) {
    for (auto m : doubling_sweep(a.m_sweep)) sizes.emplace_back(a.n, m);
  } else {
    sizes.emplace_back(a.n, a.m);
  }
  Table t;
  t.columns = {"method", "n", "m", "median_s", "q1_s", "q3_s", "repetitions", "batch"};
  for (const auto& name : a.methods) {
    for (auto [n, m] : sizes) {
      BenchConfig cfg;
      cfg.method = parse_method(name);
      cfg.n = n;
      cfg.m = m;
      cfg.repetitions = a.repetitions;
      cfg.warmup = a.warmup;
      cfg.rng_seed = g.seed;
      const auto r = time_embed(cfg);
      t.add_row({name, std::uint64_t{n}, std::uint64_t{m}, r.median_s, r.q1_s, r.q3_s,
                 std::uint64_t{r.repetitions}, std::uint64_t{r.batch}});
    }
  }
  emit_text(g, t.render(g.json()));
}

struct StorageArgs {
  std::size_t n = 128000;
  std::vector<std::size_t> ms;
  std::vector<std::string> methods{"proposed"};
  bool all_methods = false;
};

void run_storage(const Global& g, const StorageArgs& a) {
  std::vector<std::string> methods = a.methods;
  if (a.all_methods) methods = {"lsh", "bp", "cbe", "proposed"};
  std::vector<std::size_t> ms = a.ms;
  if (ms.empty()) {
    if (a.all_methods && a.n % 8 == 0) {
      ms = {a.n / 8, a.n / 4, a.n / 2, a.n};
    } else {
      ms = {a.n};
    }
  }
  Table t;
  t.columns = {"method", "n", "m", "bytes", "megabytes"};
  for (const auto& name : methods) {
    for (auto m : ms) {
      const auto bytes = storage_bytes(parse_method(name), a.n, m);
      t.add_row({name, std::uint64_t{a.n}, std::uint64_t{m}, std::uint64_t{bytes}, bytes_to_megabytes(bytes)});
    }
  }
  const std::string note = "# megabytes use 1 MB = 2^20 bytes; 32-bit floats, permutation stored as its seed\n";
  emit_text(g, g.json() ? t.to_ndjson() : note + t.to_csv());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast binary embeddings: projections, distortion analysis, similarity and benchmarks"};
  app.name("fbe");
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Random seed for every experiment")->capture_default_str();
  app.add_option("--format", g.format, "Text output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Output file (stdout when omitted)");
  app.add_option("--workers", g.workers, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  const auto methods = CLI::IsMember({"lsh", "cbe", "bp", "proposed"});

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Build a projector and write it to --out");
  c_gen->add_option("--method", gen.method)->check(methods)->capture_default_str();
  c_gen->add_option("--n", gen.n, "Input dimension")->required();
  c_gen->add_option("--m", gen.m, "Code length")->required();

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed", "Embed a vector file with a stored projector");
  c_embed->add_option("--projector", embed.projector)->required()->check(CLI::ExistingFile);
  c_embed->add_option("--input", embed.input, "FBV1 or FBS1 vector file")->required()->check(CLI::ExistingFile);

  HammingArgs ham;
  auto* c_ham = app.add_subcommand("hamming", "Hamming distances between stored codes");
  c_ham->add_option("--codes", ham.codes)->required()->check(CLI::ExistingFile);
  c_ham->add_option("--queries", ham.queries, "Query codes (default: --codes)")->check(CLI::ExistingFile);
  c_ham->add_option("--top-k", ham.top_k, "Report the k nearest items per query instead of all distances");

  RipArgs rip;
  auto* c_rip = app.add_subcommand("rip", "Monte-Carlo distortion estimate for sparse signals");
  c_rip->add_option("--n", rip.n)->capture_default_str();
  c_rip->add_option("--m", rip.m)->capture_default_str();
  c_rip->add_option("--k", rip.k, "Sparsity")->capture_default_str();
  c_rip->add_option("--trials", rip.trials)->capture_default_str();
  c_rip->add_option("--values", rip.values)
      ->check(CLI::IsMember({"binary", "binary01", "gaussian"}))
      ->capture_default_str();
  c_rip->add_option("--kind", rip.kind, "Matrix kind")
      ->check(CLI::IsMember({"both", "gaussian", "proposed"}))
      ->capture_default_str();
  c_rip->add_option("--bins", rip.bins, "Histogram bins in JSON output")->capture_default_str();

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "Probability lower bounds versus distortion");
  c_bounds->add_option("--n", bounds.n)->capture_default_str();
  c_bounds->add_option("--m", bounds.m)->capture_default_str();
  c_bounds->add_option("--k", bounds.k)->capture_default_str();

  AngleArgs angle;
  auto* c_angle = app.add_subcommand("angle", "Normalized Hamming distance versus angle");
  c_angle->add_option("--method", angle.method)->check(methods)->capture_default_str();
  c_angle->add_option("--n", angle.n)->capture_default_str();
  c_angle->add_option("--m", angle.m)->capture_default_str();
  c_angle->add_option("--replicates", angle.replicates)->capture_default_str();
  c_angle->add_option("--sparsity", angle.sparsity, "Non-zeros per input (0 = dense)")->capture_default_str();
  c_angle->add_option("--thetas", angle.thetas, "Angles in radians (default pi/8 pi/4 pi/2 3pi/4)")
      ->delimiter(',');

  RetrievalArgs ret;
  auto* c_ret = app.add_subcommand("retrieval", "Synthetic clustered retrieval, mAP at k");
  c_ret->add_option("--methods", ret.methods)->delimiter(',')->check(methods)->capture_default_str();
  c_ret->add_option("--n", ret.n)->capture_default_str();
  c_ret->add_option("--m", ret.ms, "Code lengths")->delimiter(',')->capture_default_str();
  c_ret->add_option("--corpus", ret.corpus)->capture_default_str();
  c_ret->add_option("--queries", ret.queries)->capture_default_str();
  c_ret->add_option("--top-k", ret.top_k)->capture_default_str();
  c_ret->add_option("--clusters", ret.clusters.clusters)->capture_default_str();
  c_ret->add_option("--center-sparsity", ret.clusters.center_sparsity)->capture_default_str();
  c_ret->add_option("--noise-sparsity", ret.clusters.noise_sparsity)->capture_default_str();
  c_ret->add_option("--noise-scale", ret.clusters.noise_scale)->capture_default_str();

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Median embedding time");
  c_bench->add_option("--method", bench.methods, "Methods (comma separated)")
      ->delimiter(',')
      ->check(methods)
      ->capture_default_str();
  c_bench->add_option("--n", bench.n)->capture_default_str();
  c_bench->add_option("--m", bench.m)->capture_default_str();
  c_bench->add_option("--m-sweep", bench.m_sweep, "LO:HI, doubling M at fixed N");
  c_bench->add_option("--n-sweep", bench.n_sweep, "LO:HI, doubling N at fixed N/M (needs --ratio)");
  c_bench->add_option("--ratio", bench.ratio, "N/M for --n-sweep");
  c_bench->add_option("--repetitions", bench.repetitions)->check(CLI::Range(3, 1000))->capture_default_str();
  c_bench->add_option("--warmup", bench.warmup)->check(CLI::Range(3, 1000))->capture_default_str();

  StorageArgs storage;
  auto* c_storage = app.add_subcommand("storage", "Bytes needed to store each projector");
  c_storage->add_option("--n", storage.n)->capture_default_str();
  c_storage->add_option("--m", storage.ms, "Code lengths (default N, or N/8..N with --all-methods)")
      ->delimiter(',');
  c_storage->add_option("--method", storage.methods)->delimiter(',')->check(methods)->capture_default_str();
  c_storage->add_flag("--all-methods", storage.all_methods, "lsh, bp, cbe and proposed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*c_gen) run_gen(g, gen);
    if (*c_embed) run_embed(g, embed);
    if (*c_ham) run_hamming(g, ham);
    if (*c_rip) run_rip(g, rip);
    if (*c_bounds) run_bounds(g, bounds);
    if (*c_angle) run_angle(g, angle);
    if (*c_ret) run_retrieval(g, ret);
    if (*c_bench) run_bench(g, bench);
    if (*c_storage) run_storage(g, storage);
  } catch (const UsageError& e) {
    std::cerr << "fbe: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fbe: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
