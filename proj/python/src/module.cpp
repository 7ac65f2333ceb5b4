#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fbe/bench.hpp"
#include "fbe/bounds.hpp"
#include "fbe/errors.hpp"
#include "fbe/parallel.hpp"
#include "fbe/projection.hpp"
#include "fbe/rip.hpp"
#include "fbe/serialize.hpp"
#include "fbe/similarity.hpp"

namespace py = pybind11;
using namespace fbe;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Bits = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

std::span<const double> as_vector(const Array& x) {
  if (x.ndim() != 1) throw ShapeError("expected a 1-D array");
  return {x.data(), static_cast<std::size_t>(x.shape(0))};
}

Bits to_bits(const BinaryCode& c) {
  Bits out(static_cast<py::ssize_t>(c.size()));
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < c.size(); ++i) p[i] = c.bit(i) ? 1 : 0;
  return out;
}

BinaryCode from_bits(const Bits& b) {
  if (b.ndim() != 1) throw ShapeError("expected a 1-D bit array");
  BinaryCode c(static_cast<std::size_t>(b.shape(0)));
  for (std::size_t i = 0; i < c.size(); ++i) c.set(i, b.data()[i] != 0);
  return c;
}

py::dict bound_dict(const ExactBound& b) {
  py::dict d;
  d["value"] = b.value;
  d["fraction"] = b.fraction();
  return d;
}

}  // namespace

PYBIND11_MODULE(_fbe, m) {
  m.doc() = "Fast binary embeddings h = sign(D Phi R x) and baselines";

  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_MemoryError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);

  py::class_<BinaryProjector, std::shared_ptr<BinaryProjector>>(m, "Projector")
      .def(py::init([](const std::string& method, std::size_t n, std::size_t code_bits, std::uint64_t seed) {
             return std::shared_ptr<BinaryProjector>(make_projector(parse_method(method), n, code_bits, seed));
           }),
           py::arg("method"), py::arg("n"), py::arg("m"), py::arg("seed") = 0)
      .def_property_readonly("method", [](const BinaryProjector& p) { return std::string(method_name(p.method())); })
      .def_property_readonly("n", &BinaryProjector::input_dim)
      .def_property_readonly("m", &BinaryProjector::code_bits)
      .def("project",
           [](const BinaryProjector& p, const Array& x) {
             const auto v = p.project(as_vector(x));
             return Array(static_cast<py::ssize_t>(v.size()), v.data());
           })
      .def("embed", [](const BinaryProjector& p, const Array& x) { return to_bits(p.embed(as_vector(x))); })
      .def(
          "embed_batch",
          [](const BinaryProjector& p, const Array& x, unsigned workers) {
            if (x.ndim() != 2) throw ShapeError("expected a 2-D array of row vectors");
            const auto rows = static_cast<std::size_t>(x.shape(0));
            const auto cols = static_cast<std::size_t>(x.shape(1));
            std::vector<BinaryCode> codes(rows);
            {
              py::gil_scoped_release release;
              parallel_for(rows, workers, [&](std::size_t i) { codes[i] = p.embed({x.data() + i * cols, cols}); });
            }
            Bits out({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(p.code_bits())});
            auto* o = out.mutable_data();
            for (std::size_t i = 0; i < rows; ++i)
              for (std::size_t j = 0; j < p.code_bits(); ++j) o[i * p.code_bits() + j] = codes[i].bit(j) ? 1 : 0;
            return out;
          },
          py::arg("x"), py::arg("workers") = 1)
      .def("to_bytes",
           [](const BinaryProjector& p) {
             std::ostringstream out(std::ios::binary);
             write_projector(out, p);
             return py::bytes(out.str());
           })
      .def_static("from_bytes", [](const py::bytes& blob) {
        std::istringstream in(std::string(blob), std::ios::binary);
        return std::shared_ptr<BinaryProjector>(read_projector(in));
      });

  m.def("hamming", [](const Bits& a, const Bits& b) { return hamming_distance(from_bits(a), from_bits(b)); });
  m.def("hamming_normalized",
        [](const Bits& a, const Bits& b) { return hamming_normalized(from_bits(a), from_bits(b)); });
  m.def("angle", [](const Array& a, const Array& b) { return angle_between(as_vector(a), as_vector(b)); });

  m.def("binomial", [](std::uint64_t n, std::uint64_t k) { return py::int_(py::str(binomial(n, k).str())); });
  m.def("theorem1_lower_bound", &theorem1_lower_bound, py::arg("k"), py::arg("m"), py::arg("delta"));
  m.def(
      "lemma1_exact_bound",
      [](std::size_t n, std::size_t mm, std::size_t k, std::size_t f) {
        return bound_dict(lemma1_exact_bound(n, mm, k, f));
      },
      py::arg("n"), py::arg("m"), py::arg("k"), py::arg("f"));
  m.def("lemma1_stirling_bound", &lemma1_stirling_bound, py::arg("m"), py::arg("k"), py::arg("f"));
  m.def(
      "isometry_bound",
      [](std::size_t n, std::size_t mm, std::size_t k) {
        const auto b = theorem2_bound(n, mm, k);
        auto d = bound_dict(b.exact);
        d["stirling"] = b.stirling;
        return d;
      },
      py::arg("n"), py::arg("m"), py::arg("k"));
  m.def(
      "bound_curve",
      [](std::size_t n, std::size_t mm, std::size_t k) {
        py::list rows;
        for (const auto& p : theorem3_bound_curve(n, mm, k)) {
          py::dict d;
          d["delta"] = p.delta;
          d["f"] = p.f;
          d["exact"] = p.exact.value;
          d["stirling"] = p.stirling;
          d["theorem1"] = p.theorem1;
          rows.append(d);
        }
        return rows;
      },
      py::arg("n"), py::arg("m"), py::arg("k"));

  m.def(
      "estimate_rip",
      [](const std::string& kind, std::size_t n, std::size_t mm, std::size_t k, std::size_t trials,
         const std::string& values, std::uint64_t seed, unsigned workers) {
        RipParams p;
        p.kind = parse_matrix_kind(kind);
        p.n = n;
        p.m = mm;
        p.k = k;
        p.trials = trials;
        p.value_model = parse_value_model(values);
        p.rng_seed = seed;
        RipEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate_rip(p, workers);
        }
        py::dict d;
        d["mean_delta"] = e.mean_delta;
        d["zero_fraction"] = e.zero_fraction();
        d["samples"] = Array(static_cast<py::ssize_t>(e.samples.size()), e.samples.data());
        return d;
      },
      py::arg("kind") = "proposed", py::arg("n") = 4000, py::arg("m") = 1000, py::arg("k") = 25,
      py::arg("trials") = 10000, py::arg("values") = "binary01", py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "charikar",
      [](const std::string& method, std::size_t n, std::size_t mm, std::vector<double> thetas,
         std::size_t replicates, std::size_t sparsity, std::uint64_t seed, unsigned workers) {
        CharikarParams p;
        p.method = parse_method(method);
        p.n = n;
        p.m = mm;
        p.thetas = std::move(thetas);
        p.replicates = replicates;
        p.sparsity = sparsity;
        p.rng_seed = seed;
        std::vector<HammingStats> stats;
        {
          py::gil_scoped_release release;
          stats = charikar_experiment(p, workers);
        }
        py::list rows;
        for (const auto& s : stats) {
          py::dict d;
          d["theta"] = s.theta;
          d["mean_h"] = s.mean_h;
          d["var_h"] = s.var_h;
          d["predicted_mean"] = s.predicted_mean;
          d["predicted_var"] = s.predicted_var;
          rows.append(d);
        }
        return rows;
      },
      py::arg("method"), py::arg("n"), py::arg("m"), py::arg("thetas"), py::arg("replicates") = 2000,
      py::arg("sparsity") = 0, py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "retrieval",
      [](const std::string& method, std::size_t n, std::size_t mm, std::size_t corpus, std::size_t queries,
         std::size_t top_k, std::uint64_t seed, unsigned workers) {
        RetrievalParams p;
        p.method = parse_method(method);
        p.n = n;
        p.m = mm;
        p.corpus_size = corpus;
        p.queries = queries;
        p.top_k = top_k;
        p.rng_seed = seed;
        RetrievalResult r;
        {
          py::gil_scoped_release release;
          r = synthetic_retrieval(p, workers);
        }
        py::dict d;
        d["map_at_k"] = r.map_at_k;
        d["angle_map_at_k"] = r.angle_map_at_k;
        return d;
      },
      py::arg("method"), py::arg("n") = 2048, py::arg("m") = 256, py::arg("corpus") = 5000,
      py::arg("queries") = 200, py::arg("top_k") = 50, py::arg("seed") = 0, py::arg("workers") = 1);

  m.def("storage_bytes", [](const std::string& method, std::uint64_t n, std::uint64_t mm) {
    return storage_bytes(parse_method(method), n, mm);
  });
}
