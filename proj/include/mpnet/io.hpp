#pragma once

// Network spec files and trajectory / matrix export.
//
// Spec file (JSON, 1-based nodes):
//   { "nodes": 2, "arcs": [[1,2]], "r": ["inf", 0], "s": ["inf", 3],
//     "blocking": "manufacturing",
//     "service": {"table": [[1,1,1],[2,2,2]]}   or
//                {"seeded": {"seed": 7, "max": 9, "min": 1}},
//     "steps": 20 }
// ε is written as "eps" and infinite counts as "inf" everywhere.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpnet/dynamics.hpp"
#include "mpnet/network.hpp"
#include "mpnet/system.hpp"

namespace mpnet {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NetworkFile {
  NetworkSpec spec;
  ServiceTimeSource service = ServiceTimeSource::seeded(0, 9);
  std::optional<std::size_t> steps;
};

namespace detail {

inline Count parse_count(const nlohmann::json& j, const char* field, std::size_t index) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinite;
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Count{j.get<std::size_t>()};
  throw InputError(std::string(field) + "[" + std::to_string(index + 1) + "] must be a non-negative integer or \"inf\"");
}

inline std::vector<Count> parse_counts(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_array()) throw InputError(std::string("missing array field '") + field + "'");
  std::vector<Count> out;
  for (std::size_t i = 0; i < doc[field].size(); ++i) out.push_back(parse_count(doc[field][i], field, i));
  return out;
}

inline ServiceTimeSource parse_service(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("'service' must be an object");
  if (j.contains("table")) {
    std::vector<std::vector<std::int64_t>> rows;
    try {
      rows = j["table"].get<std::vector<std::vector<std::int64_t>>>();
    } catch (const nlohmann::json::exception&) {
      throw InputError("'service.table' must be an array of integer rows");
    }
    try {
      return ServiceTimeSource::table(std::move(rows));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (j.contains("seeded")) {
    const auto& s = j["seeded"];
    if (!s.is_object() || !s.contains("seed") || !s.contains("max") || !s["seed"].is_number_integer() ||
        !s["max"].is_number_integer())
      throw InputError("'service.seeded' needs integer 'seed' and 'max'");
    const auto min = s.value("min", std::int64_t{1});
    try {
      return ServiceTimeSource::seeded(s["seed"].get<std::uint64_t>(), s["max"].get<std::int64_t>(), min);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  throw InputError("'service' needs either 'table' or 'seeded'");
}

}  // namespace detail

inline NetworkFile parse_network(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("spec document must be a JSON object");
  NetworkFile file;
  auto& spec = file.spec;

  if (!doc.contains("nodes") || !doc["nodes"].is_number_integer() || doc["nodes"].get<std::int64_t>() < 0)
    throw InputError("'nodes' must be a non-negative integer");
  spec.node_count = doc["nodes"].get<std::size_t>();

  if (!doc.contains("arcs") || !doc["arcs"].is_array()) throw InputError("missing array field 'arcs'");
  for (const auto& arc : doc["arcs"]) {
    if (!arc.is_array() || arc.size() != 2 || !arc[0].is_number_integer() || !arc[1].is_number_integer() ||
        arc[0].get<std::int64_t>() < 1 || arc[1].get<std::int64_t>() < 1)
      throw InputError("each arc must be a pair [i, j] of 1-based node numbers");
    spec.arcs.insert({arc[0].get<std::size_t>() - 1, arc[1].get<std::size_t>() - 1});
  }

  spec.initial = detail::parse_counts(doc, "r");
  spec.capacity = detail::parse_counts(doc, "s");

  if (!doc.contains("blocking") || !doc["blocking"].is_string()) throw InputError("missing string field 'blocking'");
  const auto blocking = parse_blocking(doc["blocking"].get<std::string>());
  if (!blocking) throw InputError("'blocking' must be one of none, manufacturing, communication");
  spec.blocking = *blocking;

  if (!doc.contains("service")) throw InputError("missing field 'service'");
  file.service = detail::parse_service(doc["service"]);

  if (doc.contains("steps")) {
    if (!doc["steps"].is_number_integer() || doc["steps"].get<std::int64_t>() < 0)
      throw InputError("'steps' must be a non-negative integer");
    file.steps = doc["steps"].get<std::size_t>();
  }
  return file;
}

inline NetworkFile parse_network(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_network(doc);
}

inline NetworkFile load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

inline nlohmann::json to_json(const TimeValue& x) {
  if (x.is_epsilon()) return "eps";
  return x.value();
}

inline nlohmann::json to_json(const TimeVector& v) {
  auto out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline nlohmann::json to_json(const TimeMatrix& m) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline TimeValue time_value_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "eps") return TimeValue::epsilon();
  if (j.is_number_integer()) return TimeValue{j.get<std::int64_t>()};
  throw InputError("time value must be an integer or \"eps\"");
}

// k,d_1..d_n[,a_1..a_n,b_1..b_n,c_1..c_n]
inline void write_csv(std::ostream& os, const Trajectory& traj) {
  const auto n = traj.node_count;
  os << 'k';
  for (std::size_t i = 1; i <= n; ++i) os << ",d_" << i;
  if (traj.trace)
    for (const char* name : {"a", "b", "c"})
      for (std::size_t i = 1; i <= n; ++i) os << ',' << name << '_' << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.d.size(); ++k) {
    os << k;
    for (const auto& x : traj.d[k]) os << ',' << x;
    if (traj.trace)
      for (const auto* series : {&traj.trace->a, &traj.trace->b, &traj.trace->c})
        for (const auto& x : (*series)[k]) os << ',' << x;
    os << '\n';
  }
}

inline nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json out;
  out["n"] = traj.node_count;
  out["steps"] = traj.steps;
  auto series = [](const std::vector<TimeVector>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& v : rows) arr.push_back(to_json(v));
    return arr;
  };
  out["d"] = series(traj.d);
  if (traj.trace) {
    out["a"] = series(traj.trace->a);
    out["b"] = series(traj.trace->b);
    out["c"] = series(traj.trace->c);
  }
  return out;
}

inline void write_json(std::ostream& os, const Trajectory& traj) { os << trajectory_json(traj).dump(2) << '\n'; }

// G_m, H_m, and per-step T_m(k), T̂(k) for k = 1..steps.
inline nlohmann::json matrices_json(const NetworkSpec& spec, const ServiceTimeSource& src, std::size_t steps) {
  const auto da = build_delayed_adjacency(spec);
  const auto solvability = check_solvability(da);
  nlohmann::json out;
  out["M_r"] = da.initial_horizon;
  out["M_s"] = da.capacity_horizon;
  out["M"] = da.horizon;
  out["G"] = nlohmann::json::array();
  for (const auto& g : da.g) out["G"].push_back(to_json(g));
  out["H"] = nlohmann::json::array();
  for (const auto& h : da.h) out["H"].push_back(to_json(h));
  out["solvable"] = solvability.solvable;
  if (!solvability.solvable) return out;
  out["p"] = solvability.longest_path;
  out["steps"] = nlohmann::json::array();
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto ts = build_transition_matrices(da, spec, service_matrix(src, spec.node_count, k), k, solvability);
    nlohmann::json step;
    step["k"] = k;
    step["T"] = nlohmann::json::array();
    for (const auto& t : ts.t) step["T"].push_back(to_json(t));
    step["T_hat"] = to_json(build_extended_transition(ts));
    out["steps"].push_back(std::move(step));
  }
  return out;
}

}  // namespace mpnet
