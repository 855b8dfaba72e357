#include "slapknn/classifier.hpp"
#include "slapknn/constructions.hpp"
#include "slapknn/fitter.hpp"
#include "slapknn/harness.hpp"
#include "slapknn/landscape.hpp"
#include "slapknn/serialize.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace slapknn;

namespace {

template <typename T>
py::array_t<T> as_image(const std::vector<T>& flat, std::size_t height, std::size_t width)
{
  py::array_t<T> out({height, width});
  std::copy(flat.begin(), flat.end(), out.mutable_data());
  return out;
}

py::dict grid_dict(const RasterGrid& g)
{
  py::dict d;
  d["classes"] = as_image(g.classes, g.height, g.width);
  d["confidence"] = as_image(g.confidence, g.height, g.width);
  d["bounds"] = py::make_tuple(g.bounds.xmin, g.bounds.xmax, g.bounds.ymin, g.bounds.ymax);
  d["exact_hits"] = g.exact_hits;
  return d;
}

RasterGrid grid_from(const PrototypeSet& set, std::size_t k, std::optional<std::array<double, 4>> bounds,
                     std::size_t width, std::size_t height, std::size_t threads)
{
  const Bounds b = bounds ? Bounds{(*bounds)[0], (*bounds)[1], (*bounds)[2], (*bounds)[3]} : default_bounds(set);
  return rasterize(set, k, b, width, height, threads);
}

} // namespace

PYBIND11_MODULE(_slapknn, m)
{
  m.attr("__version__") = SLAPKNN_VERSION;
  py::register_exception<Error>(m, "SlapknnError", PyExc_ValueError);

  py::enum_<LabelKind>(m, "LabelKind")
    .value("hard", LabelKind::hard)
    .value("probabilistic", LabelKind::probabilistic)
    .value("unrestricted", LabelKind::unrestricted);

  py::class_<SoftLabel>(m, "SoftLabel")
    .def(py::init<std::vector<double>, LabelKind>(), py::arg("values"),
         py::arg("kind") = LabelKind::unrestricted)
    .def_readwrite("values", &SoftLabel::values)
    .def_readwrite("kind", &SoftLabel::kind)
    .def_static("hard", &SoftLabel::hard)
    .def_static("probabilistic", &SoftLabel::probabilistic)
    .def_static("unrestricted", &SoftLabel::unrestricted)
    .def("__repr__", [](const SoftLabel& l) {
      return "SoftLabel(" + py::repr(py::cast(l.values)).cast<std::string>() + ", " + to_string(l.kind) + ")";
    });

  py::class_<Prototype>(m, "Prototype")
    .def(py::init<Point, SoftLabel>(), py::arg("position"), py::arg("label"))
    .def_readwrite("position", &Prototype::position)
    .def_readwrite("label", &Prototype::label);

  py::class_<PrototypeSet>(m, "PrototypeSet")
    .def(py::init<>())
    .def_readwrite("prototypes", &PrototypeSet::prototypes)
    .def_readwrite("num_classes", &PrototypeSet::num_classes)
    .def_readwrite("dim", &PrototypeSet::dim)
    .def_readwrite("name", &PrototypeSet::name)
    .def("__len__", &PrototypeSet::size)
    .def("to_json", [](const PrototypeSet& s) { return to_json_string(s); })
    .def_static("from_json", &prototype_set_from_json)
    .def_static("load", [](const std::string& p) { return load_prototype_set(p); })
    .def("save", [](const PrototypeSet& s, const std::string& p) { save_prototype_set(s, p); });

  m.def("validate", [](const PrototypeSet& s) {
    std::vector<std::string> out;
    for (const auto& issue : validate(s)) out.push_back(issue.message);
    return out;
  });
  m.def("label_softmax", &label_softmax);
  m.def("label_argmax", &label_argmax);

  py::class_<Classification>(m, "Classification")
    .def_readonly("scores", &Classification::scores)
    .def_readonly("predicted", &Classification::predicted)
    .def_readonly("confidence", &Classification::confidence)
    .def_readonly("exact_hit", &Classification::exact_hit);

  m.def("classify", [](const PrototypeSet& s, std::size_t k, const Point& x) { return classify(s, k, x); },
        py::arg("set"), py::arg("k"), py::arg("x"));
  m.def(
    "classify_batch",
    [](const PrototypeSet& s, std::size_t k, py::array_t<double, py::array::c_style | py::array::forcecast> xs,
       std::size_t threads) {
      if (xs.ndim() != 2) throw Error("classify_batch expects an (n, dim) array");
      std::vector<Point> points(static_cast<std::size_t>(xs.shape(0)));
      for (std::size_t i = 0; i < points.size(); ++i)
        points[i].assign(xs.data(i, 0), xs.data(i, 0) + xs.shape(1));
      std::vector<Classification> results;
      {
        py::gil_scoped_release release;
        results = classify_batch(s, k, points, threads);
      }
      py::array_t<std::size_t> predicted(points.size());
      py::array_t<double> confidence(points.size());
      for (std::size_t i = 0; i < results.size(); ++i) {
        predicted.mutable_at(i) = results[i].predicted;
        confidence.mutable_at(i) = results[i].confidence;
      }
      return py::make_tuple(predicted, confidence);
    },
    py::arg("set"), py::arg("k"), py::arg("points"), py::arg("threads") = 0);

  py::class_<Construction>(m, "Construction")
    .def_readonly("set", &Construction::set)
    .def_readonly("required_k", &Construction::required_k)
    .def_readonly("claimed_classes", &Construction::claimed_classes)
    .def_readonly("kind", &Construction::kind)
    .def_readonly("params", &Construction::params)
    .def_readonly("fit_residual", &Construction::fit_residual)
    .def_property_readonly("bounds", [](const Construction& c) {
      const Bounds b = default_bounds(c);
      return py::make_tuple(b.xmin, b.xmax, b.ymin, b.ymax);
    });

  m.def("construction_names", &construction_names);
  m.def(
    "construct",
    [](const std::string& name, std::optional<std::size_t> n, std::optional<std::size_t> mm,
       std::optional<double> spacing, std::optional<double> radius, std::optional<double> c, std::uint64_t seed) {
      return make_construction(name, ConstructionArgs{n, mm, spacing, radius, c, seed});
    },
    py::arg("name"), py::kw_only(), py::arg("n") = py::none(), py::arg("m") = py::none(),
    py::arg("spacing") = py::none(), py::arg("radius") = py::none(), py::arg("c") = py::none(),
    py::arg("seed") = 0);
  m.def("n_from_two_label_fractions", &n_from_two_label_fractions);
  m.def("circle_hard_count", &circle_hard_count);

  m.def(
    "rasterize",
    [](const PrototypeSet& s, std::size_t k, std::optional<std::array<double, 4>> bounds, std::size_t width,
       std::size_t height, std::size_t threads) {
      RasterGrid g;
      {
        py::gil_scoped_release release;
        g = grid_from(s, k, bounds, width, height, threads);
      }
      return grid_dict(g);
    },
    py::arg("set"), py::arg("k"), py::arg("bounds") = py::none(), py::arg("width") = 512,
    py::arg("height") = 512, py::arg("threads") = 0);

  m.def(
    "risk_map",
    [](const PrototypeSet& s, std::size_t k, std::optional<std::array<double, 4>> bounds, std::size_t width,
       std::size_t height, const std::string& mode, double percentile) {
      const auto g = grid_from(s, k, bounds, width, height, 0);
      return as_image(risk_render(g, {risk_mode_from_string(mode), percentile}), height, width);
    },
    py::arg("set"), py::arg("k"), py::arg("bounds") = py::none(), py::arg("width") = 512,
    py::arg("height") = 512, py::arg("mode") = "clip", py::arg("percentile") = 99.0);

  m.def(
    "region_report",
    [](const PrototypeSet& s, std::size_t k, std::optional<std::array<double, 4>> bounds, std::size_t width,
       std::size_t height) {
      const auto r = region_report(grid_from(s, k, bounds, width, height, 0));
      py::dict d;
      d["distinct_classes"] = r.distinct_classes;
      d["components_per_class"] = r.components_per_class;
      d["class_areas"] = r.class_areas;
      return d;
    },
    py::arg("set"), py::arg("k"), py::arg("bounds") = py::none(), py::arg("width") = 512,
    py::arg("height") = 512);

  m.def(
    "find_crossings",
    [](const PrototypeSet& s, std::size_t k, const Point& a, const Point& b) {
      py::list out;
      for (const auto& c : find_crossings(s, k, a, b)) out.append(py::make_tuple(c.fraction, c.from_class, c.to_class));
      return out;
    },
    py::arg("set"), py::arg("k"), py::arg("a"), py::arg("b"));
  m.def(
    "boundary_bisect",
    [](const PrototypeSet& s, std::size_t k, const Point& a, const Point& b,
       std::optional<std::pair<std::size_t, std::size_t>> pair) { return boundary_bisect(s, k, a, b, pair); },
    py::arg("set"), py::arg("k"), py::arg("a"), py::arg("b"), py::arg("class_pair") = py::none());

  m.def(
    "verify",
    [](const Construction& c, std::size_t trials, std::size_t samples, std::uint64_t seed) {
      VerifyOptions o;
      o.invariance_trials = trials;
      o.circle_samples = samples;
      o.seed = seed;
      Report r;
      {
        py::gil_scoped_release release;
        r = verify_construction(c, o);
      }
      py::list checks;
      for (const auto& ch : r.checks) {
        py::dict d;
        d["name"] = ch.name;
        d["pass"] = ch.pass;
        d["observed"] = ch.observed;
        d["expected"] = ch.expected;
        d["tol"] = ch.tol;
        checks.append(d);
      }
      py::dict d;
      d["construction"] = r.construction;
      d["checks"] = checks;
      d["pass"] = r.pass();
      return d;
    },
    py::arg("construction"), py::arg("trials") = 100, py::arg("samples") = kCircleSamples, py::arg("seed") = 0);
}
