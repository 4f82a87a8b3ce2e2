#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subtrace/analysis.hpp"
#include "subtrace/data.hpp"
#include "subtrace/influence.hpp"
#include "subtrace/model.hpp"
#include "subtrace/pipeline.hpp"
#include "subtrace/prune.hpp"
#include "subtrace/train.hpp"

namespace py = pybind11;
using namespace subtrace;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(py::array::ShapeContainer{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(const py::array_t<double>& a) {
    const auto buf = a.request();
    const auto* ptr = static_cast<const double*>(buf.ptr);
    return std::vector<double>(ptr, ptr + buf.size);
}

py::array_t<double> grid_to_array(const HeadGrid& g) {
    py::array_t<double> out({g.layers, g.heads});
    auto view = out.mutable_unchecked<2>();
    for (int l = 0; l < g.layers; ++l) {
        for (int h = 0; h < g.heads; ++h) view(l, h) = g.at(h, l);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "toy multilingual transformer lab: head subnetworks, sparse fine-tuning, "
              "and sketched training-data influence";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<ContractViolation>(m, "ContractViolationError");
    py::register_exception<FormatError>(m, "FormatError");
    py::register_exception<NumericalError>(m, "NumericalError");
    py::register_exception<LookupError>(m, "LookupKeyError");
    py::register_exception<TrainingError>(m, "TrainingRunError");
    py::register_exception<DependencyError>(m, "DependencyError");

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init([](int num_layers, int heads_per_layer, int model_dim, int ffn_dim,
                         int vocab_size, int max_seq_len, int num_classes,
                         int classifier_hidden_dim) {
                 ModelConfig c{num_layers, heads_per_layer, model_dim, ffn_dim,
                               vocab_size, max_seq_len, num_classes, classifier_hidden_dim};
                 c.validate();
                 return c;
             }),
             py::arg("num_layers") = 2, py::arg("heads_per_layer") = 4,
             py::arg("model_dim") = 32, py::arg("ffn_dim") = 64, py::arg("vocab_size") = 64,
             py::arg("max_seq_len") = 16, py::arg("num_classes") = 2,
             py::arg("classifier_hidden_dim") = 16)
        .def_readonly("num_layers", &ModelConfig::num_layers)
        .def_readonly("heads_per_layer", &ModelConfig::heads_per_layer)
        .def_readonly("model_dim", &ModelConfig::model_dim)
        .def_readonly("ffn_dim", &ModelConfig::ffn_dim)
        .def_readonly("vocab_size", &ModelConfig::vocab_size)
        .def_readonly("max_seq_len", &ModelConfig::max_seq_len)
        .def_readonly("num_classes", &ModelConfig::num_classes)
        .def_readonly("classifier_hidden_dim", &ModelConfig::classifier_hidden_dim)
        .def("__eq__", [](const ModelConfig& a, const ModelConfig& b) { return a == b; });

    py::class_<ParamSegment>(m, "ParamSegment")
        .def_readonly("name", &ParamSegment::name)
        .def_readonly("rows", &ParamSegment::rows)
        .def_readonly("cols", &ParamSegment::cols)
        .def_readonly("offset", &ParamSegment::offset)
        .def("size", &ParamSegment::size);

    py::class_<Parameters>(m, "Parameters")
        .def_property_readonly("config", [](const Parameters& p) { return p.config; })
        .def_property_readonly("values", [](const Parameters& p) { return to_array(p.values); })
        .def("set_values",
             [](Parameters& p, const py::array_t<double>& a) {
                 auto v = from_array(a);
                 if (v.size() != p.values.size()) {
                     throw ContractViolation("set_values: length mismatch");
                 }
                 p.values = std::move(v);
             })
        .def_property_readonly("segments",
                               [](const Parameters& p) { return p.layout.segments(); })
        .def("content_hash", &Parameters::content_hash)
        .def("save", &save_parameters, py::arg("path"));

    m.def("parameter_count", &parameter_count, py::arg("config"));
    m.def("init_model", &init_model, py::arg("config"), py::arg("seed"));
    m.def("load_parameters", &load_parameters, py::arg("path"));

    py::class_<HeadMask>(m, "HeadMask")
        .def_static("ones", &HeadMask::ones, py::arg("heads"), py::arg("layers"))
        .def_static("load", &HeadMask::load, py::arg("path"))
        .def_static("from_json", &HeadMask::from_json_string, py::arg("text"))
        .def_readonly("heads", &HeadMask::heads)
        .def_readonly("layers", &HeadMask::layers)
        .def("at", &HeadMask::at, py::arg("head"), py::arg("layer"))
        .def("set", &HeadMask::set, py::arg("head"), py::arg("layer"), py::arg("value"))
        .def("enabled_count", &HeadMask::enabled_count)
        .def("disabled_count", &HeadMask::disabled_count)
        .def("to_json", &HeadMask::to_json_string)
        .def("save", &HeadMask::save, py::arg("path"))
        .def("content_hash", &HeadMask::content_hash)
        .def("__eq__", [](const HeadMask& a, const HeadMask& b) { return a == b; });

    py::class_<Example>(m, "Example")
        .def(py::init([](std::vector<int> tokens, int label, int language,
                         std::int64_t latent_id) {
                 Example e;
                 e.tokens = std::move(tokens);
                 e.label = label;
                 e.language = language;
                 e.latent_id = latent_id;
                 return e;
             }),
             py::arg("tokens"), py::arg("label"), py::arg("language") = 0,
             py::arg("latent_id") = -1)
        .def_readonly("tokens", &Example::tokens)
        .def_readonly("label", &Example::label)
        .def_readonly("language", &Example::language)
        .def_readonly("latent_id", &Example::latent_id);

    m.def("forward",
          [](const Parameters& p, const Example& e, const HeadMask& m_) {
              return to_array(forward(p, e, m_));
          },
          py::arg("params"), py::arg("example"), py::arg("mask"));
    m.def("loss_and_grad",
          [](const Parameters& p, const Example& e, const HeadMask& m_) {
              auto lg = loss_and_grad(p, e, m_);
              return py::make_tuple(lg.loss, to_array(lg.grad));
          },
          py::arg("params"), py::arg("example"), py::arg("mask"));
    m.def("gate_grad",
          [](const Parameters& p, const Example& e, const HeadMask& m_) {
              return grid_to_array(gate_grad(p, e, m_));
          },
          py::arg("params"), py::arg("example"), py::arg("mask"),
          "Loss derivative w.r.t. each head gate, as a (layers, heads) array");
    m.def("predict", &predict, py::arg("params"), py::arg("example"), py::arg("mask"));
    m.def("evaluate",
          [](const Parameters& p, const std::vector<Example>& data, const HeadMask& m_) {
              return evaluate(p, data, m_);
          },
          py::arg("params"), py::arg("dataset"), py::arg("mask"));

    py::class_<Corpus>(m, "Corpus")
        .def_readonly("split", &Corpus::split)
        .def_readonly("examples", &Corpus::examples)
        .def_readonly("language_ids", &Corpus::language_ids)
        .def("size", &Corpus::size)
        .def("content_hash", &Corpus::content_hash)
        .def("save_jsonl", &save_jsonl, py::arg("path"))
        .def("language_slice", &language_slice, py::arg("language"));

    m.def("load_jsonl", &load_jsonl, py::arg("path"), py::arg("split") = "train");

    py::class_<HeadImportanceMap>(m, "HeadImportanceMap")
        .def_property_readonly("scores",
                               [](const HeadImportanceMap& h) { return grid_to_array(h.scores); })
        .def_readonly("sample_count", &HeadImportanceMap::sample_count);

    m.def("head_importance",
          [](const Parameters& p, const std::vector<Example>& slice, const HeadMask& m_) {
              return head_importance(p, slice, m_);
          },
          py::arg("params"), py::arg("slice"), py::arg("mask"));
    m.def("find_subnetwork",
          [](const Parameters& p, const std::vector<Example>& train,
             const std::vector<Example>& dev, double threshold, double rate) {
              auto result = find_subnetwork(p, train, dev, threshold, rate);
              py::list iters;
              for (const auto& it : result.trace.iterations) {
                  iters.append(py::make_tuple(it.mask, it.dev_accuracy));
              }
              return py::make_tuple(result.mask, result.trace.base_accuracy,
                                    result.trace.stop_reason, iters);
          },
          py::arg("params"), py::arg("train_slice"), py::arg("dev_slice"),
          py::arg("threshold") = 0.95, py::arg("rate") = 0.10,
          "Returns (mask, base_accuracy, stop_reason, [(mask, dev_acc), ...])");
    m.def("shuffle_mask", &shuffle_mask, py::arg("mask"), py::arg("seed"));

    m.def("mask_cosine",
          [](const HeadMask& a, const HeadMask& b, std::optional<int> layer) {
              return mask_cosine(a, b, layer);
          },
          py::arg("a"), py::arg("b"), py::arg("layer") = py::none());
    m.def("compose",
          [](const HeadMask& a, const HeadMask& b, const std::string& op) {
              if (op != "union" && op != "intersect") {
                  throw ContractViolation("op must be union or intersect");
              }
              return compose(a, b, op == "union" ? MaskOp::Union : MaskOp::Intersect);
          },
          py::arg("a"), py::arg("b"), py::arg("op"));
    m.def("pearson",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              const auto r = pearson(x, y);
              return py::make_tuple(r.r, r.count);
          },
          py::arg("x"), py::arg("y"));

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init([](double learning_rate, double weight_decay, int batch_size, int epochs,
                         std::uint64_t seed, const std::string& mode,
                         const std::map<int, HeadMask>& language_masks) {
                 TrainConfig t;
                 t.learning_rate = learning_rate;
                 t.weight_decay = weight_decay;
                 t.batch_size = batch_size;
                 t.epochs = epochs;
                 t.seed = seed;
                 if (mode == "full") {
                     t.mode = TrainMode::Full;
                 } else if (mode == "sft") {
                     t.mode = TrainMode::Sft;
                 } else {
                     throw ConfigError("mode must be full or sft");
                 }
                 t.language_masks = language_masks;
                 return t;
             }),
             py::arg("learning_rate") = 1e-3, py::arg("weight_decay") = 0.01,
             py::arg("batch_size") = 16, py::arg("epochs") = 4, py::arg("seed") = 0,
             py::arg("mode") = "full",
             py::arg("language_masks") = std::map<int, HeadMask>{});

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("epoch", &Snapshot::epoch)
        .def_readonly("params", &Snapshot::params)
        .def_readonly("dev_accuracy", &Snapshot::dev_accuracy);

    py::class_<CheckpointStore>(m, "CheckpointStore")
        .def_readonly("snapshots", &CheckpointStore::snapshots)
        .def("epochs", &CheckpointStore::epochs)
        .def("final_params", &CheckpointStore::final_params)
        .def("content_hash", &CheckpointStore::content_hash)
        .def("save", &CheckpointStore::save, py::arg("dir"))
        .def_static("load", &CheckpointStore::load, py::arg("dir"));

    m.def("train_full", &train_full, py::arg("init"), py::arg("train"), py::arg("dev"),
          py::arg("config"));
    m.def("train_sft", &train_sft, py::arg("init"), py::arg("train"), py::arg("dev"),
          py::arg("config"));

    py::class_<SketchProjector>(m, "SketchProjector")
        .def_readonly("d", &SketchProjector::d)
        .def_readonly("seed", &SketchProjector::seed)
        .def_property_readonly("scheme", [](const SketchProjector& p) {
            return sketch_scheme_name(p.scheme);
        });

    m.def("build_projector",
          [](std::uint64_t seed, int d, const Parameters& params, const std::string& scheme) {
              return build_projector(seed, d, params.layout, sketch_scheme_from_name(scheme));
          },
          py::arg("seed"), py::arg("d"), py::arg("params"), py::arg("scheme") = "dense-full");
    m.def("sketch_gradient",
          [](const SketchProjector& proj, const py::array_t<double>& grad) {
              return to_array(sketch_gradient(proj, from_array(grad)));
          },
          py::arg("projector"), py::arg("grad"));
    m.def("tracin_score",
          [](const std::vector<py::array_t<double>>& train_cp,
             const std::vector<py::array_t<double>>& test_cp, bool normalize) {
              std::vector<std::vector<double>> u, v;
              for (const auto& a : train_cp) u.push_back(from_array(a));
              for (const auto& a : test_cp) v.push_back(from_array(a));
              std::vector<std::span<const double>> us, vs;
              for (const auto& x : u) us.emplace_back(x);
              for (const auto& x : v) vs.emplace_back(x);
              return tracin_score(us, vs, normalize);
          },
          py::arg("train_checkpoints"), py::arg("test_checkpoints"),
          py::arg("normalize") = true);
    m.def("rank_top_m",
          [](const std::vector<double>& scores, int m_, int test_id) {
              const auto r = rank_top_m(scores, m_, test_id);
              py::list pos, neg;
              for (const auto& e : r.positive) pos.append(py::make_tuple(e.train_id, e.score));
              for (const auto& e : r.negative) neg.append(py::make_tuple(e.train_id, e.score));
              return py::make_tuple(pos, neg);
          },
          py::arg("scores"), py::arg("m"), py::arg("test_id") = -1);

    py::class_<Pipeline>(m, "Pipeline")
        .def(py::init([](const std::string& config_path, const std::string& out_dir) {
                 return Pipeline(ExperimentConfig::from_json_file(config_path), out_dir);
             }),
             py::arg("config_path"), py::arg("out_dir") = "")
        .def("gen_data", &Pipeline::cmd_gen_data)
        .def("train", &Pipeline::cmd_train, py::arg("run"))
        .def("prune", &Pipeline::cmd_prune, py::arg("language") = py::none())
        .def("influence", &Pipeline::cmd_influence, py::arg("variant"))
        .def("analyze", &Pipeline::cmd_analyze)
        .def("report", &Pipeline::cmd_report)
        .def("out_dir", &Pipeline::out_dir);
}
