// Python bindings for the twotier core.

#include <fstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "twotier/abstraction.hpp"
#include "twotier/community.hpp"
#include "twotier/evolution.hpp"
#include "twotier/kshell.hpp"
#include "twotier/report.hpp"
#include "twotier/synth.hpp"

namespace py = pybind11;
using namespace twotier;

namespace {

using EdgeList = std::vector<std::tuple<NodeId, NodeId, Weight>>;

FrameGraph graph_of(const EdgeList& edges, const std::vector<NodeId>& nodes) {
  std::vector<WeightedEdge> out;
  out.reserve(edges.size());
  for (const auto& [a, b, w] : edges) out.push_back({a, b, w});
  return FrameGraph(0, nodes, std::move(out));
}

std::map<NodeId, std::uint32_t> shells(const EdgeList& edges, const std::vector<NodeId>& nodes) {
  const auto s = wks_decompose(graph_of(edges, nodes));
  std::map<NodeId, std::uint32_t> out;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) out[s.nodes[i]] = s.shells[i];
  return out;
}

py::dict detect_py(const EdgeList& edges, const std::vector<NodeId>& nodes, std::uint64_t seed, double resolution) {
  const auto p = detect(graph_of(edges, nodes), {seed, resolution});
  std::map<NodeId, std::uint32_t> labels;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) labels[p.nodes[i]] = p.assignment[i];
  py::dict out;
  out["communities"] = labels;
  out["modularity"] = p.modularity;
  out["degenerate"] = p.degenerate;
  return out;
}

double modularity_py(const EdgeList& edges, const std::map<NodeId, std::uint32_t>& labels, double resolution) {
  std::vector<NodeId> nodes;
  for (const auto& [id, _] : labels) nodes.push_back(id);
  const auto g = graph_of(edges, nodes);
  std::vector<std::uint32_t> aligned;
  for (auto id : g.nodes()) {
    const auto it = labels.find(id);
    if (it == labels.end()) throw Error("node " + std::to_string(id) + " has no label");
    aligned.push_back(it->second);
  }
  return modularity(g, make_partition(g, aligned), resolution);
}

py::list classify_py(const std::vector<std::vector<Community>>& frames, double alpha, double beta,
                     double continue_jaccard, std::optional<int> max_gap) {
  std::vector<std::vector<Community>> sorted = frames;
  for (auto& frame : sorted)
    for (auto& c : frame) c = make_node_set(std::move(c));
  const auto tl = classify(sorted, {alpha, beta, continue_jaccard, max_gap});
  auto refs = [](const std::vector<CommunityRef>& rs) {
    py::list out;
    for (const auto& r : rs) out.append(py::make_tuple(r.frame, r.index));
    return out;
  };
  py::list out;
  for (const auto& e : tl.events) {
    py::dict d;
    d["kind"] = std::string(to_string(e.kind));
    d["attribute"] = std::string(to_string(e.attribute));
    d["frame"] = e.frame;
    d["track"] = e.track;
    d["predecessors"] = refs(e.predecessors);
    d["successors"] = refs(e.successors);
    d["size_before"] = e.size_before;
    d["size_after"] = e.size_after;
    out.append(std::move(d));
  }
  return out;
}

std::size_t generate_py(const std::filesystem::path& path, const std::string& preset, std::uint64_t seed,
                        const std::string& format) {
  const auto out = generate(preset_by_name(preset, seed));
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  write_log(file, out.records, parse_log_format(format));
  return out.records.size();
}

py::list run_pipeline_py(const py::dict& settings) {
  PipelineConfig config;
  for (const auto& [key, value] : settings) {
    std::string text;
    if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
      for (const auto& item : value) text += (text.empty() ? "" : ",") + py::str(item).cast<std::string>();
    } else {
      text = py::str(value).cast<std::string>();
    }
    apply_setting(config, py::str(key).cast<std::string>(), text);
  }
  const auto analysis = [&] {
    py::gil_scoped_release release;
    return run_pipeline(config);
  }();
  py::list rows;
  for (const auto& r : summarize(analysis)) {
    py::dict d;
    d["x"] = r.x;
    d["split"] = r.split;
    d["metric"] = r.metric;
    d["value"] = r.value;
    rows.append(std::move(d));
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_twotier, m) {
  m.doc() = "Backbone, community and core-periphery analysis of temporal team networks";
  m.attr("__version__") = TWOTIER_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def("weighted_degree", py::overload_cast<std::uint64_t, std::uint64_t>(&weighted_degree), py::arg("degree"),
        py::arg("strength"), "round(sqrt(degree * strength)) in exact integer arithmetic");
  m.def("wks_shells", &shells, py::arg("edges"), py::arg("nodes") = std::vector<NodeId>{},
        "Weighted k-shell index of every node; edges are (a, b, weight) triples");
  m.def("detect", &detect_py, py::arg("edges"), py::arg("nodes") = std::vector<NodeId>{}, py::arg("seed") = 42,
        py::arg("resolution") = 1.0, "Louvain community detection; returns communities and modularity");
  m.def("modularity", &modularity_py, py::arg("edges"), py::arg("labels"), py::arg("resolution") = 1.0);
  m.def(
      "betweenness",
      [](std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges, bool normalized) {
        return betweenness(n, edges, normalized);
      },
      py::arg("node_count"), py::arg("edges"), py::arg("normalized") = false);
  m.def("density", py::overload_cast<std::size_t, std::size_t>(&density), py::arg("nodes"), py::arg("edges"));
  m.def("classify_events", &classify_py, py::arg("frames"), py::arg("alpha") = 0.5, py::arg("beta") = 0.5,
        py::arg("continue_jaccard") = 0.5, py::arg("max_gap") = std::nullopt,
        "Evolution events of a sequence of frames, each a list of communities (lists of node ids)");
  m.def("generate_log", &generate_py, py::arg("path"), py::arg("preset") = "small", py::arg("seed") = 42,
        py::arg("format") = "csv", "Writes a synthetic activity log; returns the number of team records");
  m.def("run_pipeline", &run_pipeline_py, py::arg("settings"),
        "Runs the full analysis with config-file style settings and returns the summary rows");
}
