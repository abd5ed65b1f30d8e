//
// Copyright 2026 The synaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <iostream>
#include <sstream>

#include "synaudit/attack.hpp"
#include "synaudit/classifier.hpp"
#include "synaudit/conditioning.hpp"
#include "synaudit/embedding.hpp"
#include "synaudit/error.hpp"
#include "synaudit/fixture.hpp"
#include "synaudit/stats.hpp"
#include "synaudit/tensor_io.hpp"

namespace py = pybind11;
using namespace synaudit;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<float> to_numpy(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape.begin(), t.shape.end());
  py::array_t<float> out(shape);
  std::copy(t.data.begin(), t.data.end(), out.mutable_data());
  return out;
}

Tensor from_numpy(const FloatArray& a) {
  Tensor t;
  for (py::ssize_t i = 0; i < a.ndim(); ++i) t.shape.push_back(static_cast<std::size_t>(a.shape(i)));
  t.data.assign(a.data(), a.data() + a.size());
  return t;
}

PointRows<double> rows_of(const DoubleArray& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::kShapeMismatch, "expected a 2-D array");
  PointRows<double> r;
  r.dim = static_cast<std::size_t>(a.shape(1));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) r.rows.push_back(a.data() + i * a.shape(1));
  return r;
}

std::vector<Origin> origins_of(const std::vector<std::string>& tokens) {
  std::vector<Origin> out;
  for (const auto& t : tokens) out.push_back(parse_origin(t));
  return out;
}

Direction direction_of(const std::string& token) {
  if (token == "smallest") return Direction::kSmallestFirst;
  if (token == "largest") return Direction::kLargestFirst;
  throw Error(ErrorCode::kInvalidArgument, "direction must be smallest or largest");
}

py::dict dataset_dict(const LabeledDataset& ds) {
  py::dict d;
  d["pixels"] = to_numpy(to_tensor(ds));
  std::vector<std::string> ids, labels, origins;
  for (const auto& s : ds.samples()) {
    ids.push_back(s.id);
    labels.push_back(std::string(to_string(s.label)));
    origins.push_back(std::string(to_string(s.origin)));
  }
  d["ids"] = ids;
  d["labels"] = labels;
  d["origins"] = origins;
  return d;
}

py::list cutoff_rows(const CutoffTable& table) {
  py::list rows;
  for (const auto& r : table.rows) {
    py::dict d;
    d["cutoff"] = r.cutoff;
    d["train"] = r.train;
    d["val"] = r.val;
    d["test"] = r.test;
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_synaudit, m) {
  m.doc() = "Privacy and diversity audit for synthetic image datasets";
  m.attr("__version__") = SYNAUDIT_VERSION;

  py::register_exception<Error>(m, "SynauditError", PyExc_ValueError);

  // Arrays.
  m.def("read_array", [](const std::filesystem::path& p) { return to_numpy(load_array(p)); },
        py::arg("path"));
  m.def("write_array",
        [](const FloatArray& a, const std::filesystem::path& p) { save_array(from_numpy(a), p); },
        py::arg("array"), py::arg("path"));

  // Fixtures.
  m.def(
      "make_fixture",
      [](const std::string& kind, std::size_t train, std::size_t val, std::size_t test,
         std::optional<std::size_t> synthetic, double epsilon, std::tuple<std::size_t, std::size_t, std::size_t> shape,
         std::size_t rank, std::uint64_t seed, bool shuffle_labels) {
        FixtureSpec spec;
        spec.kind = parse_fixture_kind(kind);
        spec.train = train;
        spec.val = val;
        spec.test = test;
        spec.synthetic = synthetic;
        spec.epsilon = epsilon;
        spec.shape = {std::get<0>(shape), std::get<1>(shape), std::get<2>(shape)};
        spec.world_rank = rank;
        spec.seed = seed;
        spec.shuffle_labels = shuffle_labels;
        const Fixture f = make_fixture(spec);
        py::dict out;
        out["train"] = dataset_dict(f.train);
        out["val"] = dataset_dict(f.val);
        out["test"] = dataset_dict(f.test);
        py::dict synth = dataset_dict(f.synthetic);
        synth["provenance"] = f.synthetic_provenance;
        out["synthetic"] = synth;
        return out;
      },
      py::arg("kind") = "private", py::arg("train") = 1000, py::arg("val") = 400,
      py::arg("test") = 400, py::arg("synthetic") = py::none(), py::arg("epsilon") = 0.05,
      py::arg("shape") = std::make_tuple(9, 16, 16), py::arg("rank") = 8,
      py::arg("seed") = 0, py::arg("shuffle_labels") = false);

  // Embedding.
  py::class_<EmbeddingModel>(m, "EmbeddingModel")
      .def_property_readonly("dim", &EmbeddingModel::dim)
      .def_property_readonly("input_dim", &EmbeddingModel::input_dim)
      .def_property_readonly("mean", &EmbeddingModel::mean)
      .def_property_readonly("components", &EmbeddingModel::components)
      .def_property_readonly("eigenvalues", &EmbeddingModel::eigenvalues)
      .def_property_readonly("total_variance", &EmbeddingModel::total_variance)
      .def("transform",
           [](const EmbeddingModel& self, const Eigen::MatrixXd& rows) { return self.transform(rows); })
      .def("inverse_transform", &EmbeddingModel::inverse_transform)
      .def("explained_variance_ratio", &EmbeddingModel::explained_variance_ratio);
  m.def(
      "fit_embedding",
      [](const Eigen::MatrixXd& rows, std::size_t dim, unsigned workers) {
        const ImageShape shape{1, 1, static_cast<std::size_t>(rows.cols())};
        return fit_embedding(rows, shape, dim, workers);
      },
      py::arg("rows"), py::arg("dim") = kDefaultEmbeddingDim, py::arg("workers") = 1);

  // Attacks on row matrices (N x D candidates, M x D synthetic).
  m.def(
      "min_distances",
      [](const DoubleArray& candidates, const DoubleArray& synthetic, unsigned workers) {
        NearestNeighbors nn = nearest_synthetic(rows_of(candidates), rows_of(synthetic), workers);
        return py::make_tuple(nn.distance, nn.index);
      },
      py::arg("candidates"), py::arg("synthetic"), py::arg("workers") = 1);
  m.def(
      "neighbor_counts",
      [](const DoubleArray& candidates, const DoubleArray& synthetic, double threshold,
         unsigned workers) {
        return count_within(rows_of(candidates), rows_of(synthetic), threshold, workers);
      },
      py::arg("candidates"), py::arg("synthetic"), py::arg("threshold"), py::arg("workers") = 1);
  m.def(
      "neighbor_threshold",
      [](const DoubleArray& candidates, const DoubleArray& synthetic, double percentile) {
        if (!(percentile > 0.0 && percentile < 100.0)) {
          throw Error(ErrorCode::kOutOfDomain, "percentile must lie in (0, 100)");
        }
        auto d = all_distances(rows_of(candidates), rows_of(synthetic));
        std::sort(d.begin(), d.end());
        return quantile_sorted(d, percentile);
      },
      py::arg("candidates"), py::arg("synthetic"), py::arg("percentile"));
  m.def(
      "cutoff_table",
      [](const std::vector<double>& scores, const std::vector<std::string>& origins,
         const std::vector<std::size_t>& cutoffs, const std::string& direction) {
        return cutoff_rows(
            cutoff_table(scores, origins_of(origins), cutoffs, direction_of(direction)));
      },
      py::arg("scores"), py::arg("origins"), py::arg("cutoffs"), py::arg("direction"));
  m.def(
      "attack_auc",
      [](const std::vector<double>& scores, const std::vector<std::string>& origins,
         const std::string& positive, const std::string& negative, const std::string& direction) {
        return attack_auc(scores, origins_of(origins), parse_origin(positive),
                          parse_origin(negative), direction_of(direction));
      },
      py::arg("scores"), py::arg("origins"), py::arg("positive") = "train",
      py::arg("negative") = "val", py::arg("direction") = "smallest");

  // Statistics.
  m.def(
      "roc_curve",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        const RocCurve c = roc_curve(scores, labels);
        std::vector<double> fpr, tpr;
        for (const auto& p : c.points) {
          fpr.push_back(p.fpr);
          tpr.push_back(p.tpr);
        }
        return py::make_tuple(fpr, tpr, c.auc);
      },
      py::arg("scores"), py::arg("labels"));
  m.def("auc_rank", [](const std::vector<double>& s, const std::vector<int>& l) { return auc_rank(s, l); },
        py::arg("scores"), py::arg("labels"));
  m.def("empirical_quantile",
        [](const std::vector<double>& v, double p) { return empirical_quantile(v, p); },
        py::arg("values"), py::arg("percent"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));
  m.def(
      "bca_interval",
      [](const std::vector<double>& data, const std::function<double(std::vector<double>)>& stat,
         std::size_t n_resamples, double alpha, std::uint64_t seed) {
        const BootstrapCI ci = bca_interval(
            data, [&](std::span<const double> s) { return stat(std::vector<double>(s.begin(), s.end())); },
            n_resamples, alpha, seed, 1);
        py::dict d;
        d["estimate"] = ci.estimate;
        d["lower"] = ci.lower;
        d["upper"] = ci.upper;
        d["method"] = ci.method;
        d["bias_correction"] = ci.bias_correction;
        d["acceleration"] = ci.acceleration;
        return d;
      },
      py::arg("data"), py::arg("statistic"), py::arg("n_resamples") = 2000,
      py::arg("alpha") = 0.05, py::arg("seed") = 0);

  // Conditioning.
  m.def("one_hot", [](std::size_t k) { return one_hot(k).weights; }, py::arg("k"));
  m.def(
      "morph_step",
      [](std::size_t k, std::size_t k2, std::size_t n, std::size_t t) {
        return morph_step(k, k2, n, t).weights;
      },
      py::arg("source"), py::arg("target"), py::arg("n"), py::arg("t"));
  m.def(
      "morph_schedule",
      [](std::size_t k, std::size_t k2, std::size_t n) {
        std::vector<std::vector<double>> out;
        for (const auto& c : morph_schedule(k, k2, n).steps) out.push_back(c.weights);
        return out;
      },
      py::arg("source"), py::arg("target"), py::arg("n"));
  m.def(
      "sample_labels",
      [](const std::vector<double>& p, std::size_t n, std::uint64_t seed) {
        std::vector<int> out;
        for (Label l : sample_labels(make_distribution(p), n, seed)) out.push_back(label_index(l));
        return out;
      },
      py::arg("probabilities"), py::arg("n"), py::arg("seed"));
  m.def("sample_latent", [](std::uint64_t seed) { return sample_latent(seed).values; },
        py::arg("seed"));

  // Classifier.
  py::class_<LinearClassifier>(m, "LinearClassifier")
      .def_property_readonly("weights", py::overload_cast<>(&LinearClassifier::weights, py::const_))
      .def_property_readonly("bias", py::overload_cast<>(&LinearClassifier::bias, py::const_))
      .def_readonly("loss_history", &LinearClassifier::loss_history)
      .def("predict_proba", &LinearClassifier::predict_proba);
  m.def(
      "train_classifier",
      [](const Eigen::MatrixXd& features, const std::vector<int>& labels, double learning_rate,
         double momentum, std::size_t epochs, std::size_t batch_size, std::uint64_t seed) {
        TrainConfig c{learning_rate, momentum, epochs, batch_size, seed};
        return train(features, labels, c);
      },
      py::arg("features"), py::arg("labels"), py::arg("learning_rate") = 1e-4,
      py::arg("momentum") = 0.9, py::arg("epochs") = 20, py::arg("batch_size") = 32,
      py::arg("seed") = 0);
}
