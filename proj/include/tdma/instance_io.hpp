#pragma once

// NcInstance <-> JSON (schema_version 1) and Graphviz DOT export.
//
//   {
//     "schema_version": 1,
//     "nodes":   [{"id": "E1", "paper_index": "n_1^1", "subset": "V1", "capacity": 3}, ...],
//     "edges":   [["B1", "E1"], ...],        // each undirected edge once, sorted
//     "flows":   [{"src": "A1", "dst": "B1", "copies": 1, "label": "preload-1"},
//                 {"src": "E1", "dst": "T", "copies": "unbounded", "label": "main"}],
//     "formula": "p cnf 6 3\n..." | null
//   }

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tdma/capacity_model.hpp"
#include "tdma/cnf.hpp"
#include "tdma/error.hpp"
#include "tdma/instance.hpp"

namespace tdma {

inline constexpr int kSchemaVersion = 1;

inline nlohmann::ordered_json to_json(const NcInstance& inst) {
  using nlohmann::ordered_json;
  const Network& net = inst.network;
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;

  ordered_json nodes = ordered_json::array();
  for (NodeId v = 0; v < net.size(); ++v) {
    const NodeInfo& info = inst.node_info.at(v);
    ordered_json node;
    node["id"] = net.name(v);
    node["paper_index"] = info.paper_index ? ordered_json(*info.paper_index) : ordered_json(nullptr);
    node["subset"] = info.subset;
    node["capacity"] = net.capacity(v);
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);

  std::vector<std::pair<std::string, std::string>> edges;
  for (auto [u, v] : net.edges()) {
    auto a = net.name(u), b = net.name(v);
    if (b < a) std::swap(a, b);
    edges.emplace_back(std::move(a), std::move(b));
  }
  std::sort(edges.begin(), edges.end());
  ordered_json edge_list = ordered_json::array();
  for (auto& [a, b] : edges) edge_list.push_back({a, b});
  doc["edges"] = std::move(edge_list);

  ordered_json flows = ordered_json::array();
  for (const auto& f : inst.flows) {
    ordered_json flow;
    flow["src"] = net.name(f.source);
    flow["dst"] = net.name(f.destination);
    flow["copies"] = f.copies.is_unbounded() ? ordered_json("unbounded") : ordered_json(f.copies.value());
    flow["label"] = f.label;
    flows.push_back(std::move(flow));
  }
  doc["flows"] = std::move(flows);
  doc["formula"] = inst.formula ? ordered_json(emit_dimacs(*inst.formula)) : ordered_json(nullptr);
  return doc;
}

inline std::string save_instance(const NcInstance& inst) { return to_json(inst).dump(2) + "\n"; }

inline NcInstance from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw InputError("unsupported schema_version");
    }
    NcInstance inst;
    for (const auto& node : doc.at("nodes")) {
      inst.network.add_node(node.at("id").get<std::string>(), node.at("capacity").get<Load>());
      NodeInfo info;
      if (const auto& pi = node.at("paper_index"); !pi.is_null()) info.paper_index = pi.get<std::string>();
      info.subset = node.at("subset").get<std::string>();
      inst.node_info.push_back(std::move(info));
    }
    for (const auto& edge : doc.at("edges")) {
      if (!edge.is_array() || edge.size() != 2) throw InputError("edge must be a pair of ids");
      inst.network.add_edge(inst.network.at(edge[0].get<std::string>()),
                            inst.network.at(edge[1].get<std::string>()));
    }
    for (const auto& flow : doc.at("flows")) {
      FlowRequest req;
      req.source = inst.network.at(flow.at("src").get<std::string>());
      req.destination = inst.network.at(flow.at("dst").get<std::string>());
      const auto& copies = flow.at("copies");
      if (copies.is_string()) {
        if (copies.get<std::string>() != "unbounded") throw InputError("copies must be a count or \"unbounded\"");
        req.copies = CopyCount::unbounded();
      } else {
        const auto n = copies.get<long long>();
        if (n < 1) throw InputError("copies must be positive");
        req.copies = CopyCount::finite(static_cast<std::size_t>(n));
      }
      req.label = flow.value("label", std::string{});
      inst.flows.push_back(std::move(req));
    }
    if (const auto it = doc.find("formula"); it != doc.end() && !it->is_null()) {
      inst.formula = parse_dimacs(it->get<std::string>());
    }
    inst.validate();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
}

inline NcInstance load_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  return from_json(doc);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("write failed for " + path);
}

// ------------------------------------------------------------------- DOT

namespace detail {

inline const char* dot_shape(const std::string& subset) {
  if (subset == "V1") return "doublecircle";
  if (subset == "V2") return "box";
  if (subset == "V3") return "circle";
  if (subset == "V4") return "diamond";
  if (subset == "V5") return "triangle";
  return "ellipse";
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string dot_quote(const std::string& s) { return "\"" + dot_escape(s) + "\""; }

}  // namespace detail

// One node line per node, one edge line per undirected edge.
inline std::string to_dot(const NcInstance& inst) {
  const Network& net = inst.network;
  std::ostringstream out;
  out << "graph nc {\n";
  for (NodeId v = 0; v < net.size(); ++v) {
    const NodeInfo& info = inst.node_info.at(v);
    std::string label = detail::dot_escape(net.name(v));
    if (info.paper_index) label += "\\n" + detail::dot_escape(*info.paper_index);
    label += "\\n[" + std::to_string(net.capacity(v)) + "]";
    out << "  " << detail::dot_quote(net.name(v)) << " [shape=" << detail::dot_shape(info.subset)
        << ", label=\"" << label << "\", group=" << detail::dot_quote(info.subset) << "];\n";
  }
  for (auto [u, v] : net.edges()) {
    out << "  " << detail::dot_quote(net.name(u)) << " -- " << detail::dot_quote(net.name(v)) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tdma
