#include "qpar/io.hpp"

#include <fstream>
#include <set>

#include "qpar/error.hpp"

namespace qpar {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex values must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json mat2_to_json(const Mat2& u) {
  return json::array({json::array({complex_to_json(u(0, 0)), complex_to_json(u(0, 1))}),
                      json::array({complex_to_json(u(1, 0)), complex_to_json(u(1, 1))})});
}

Mat2 mat2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw ParseError("unitary must be a 2x2 matrix of [re, im] pairs");
  Mat2 u;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) u(r, c) = complex_from_json(j[r][c]);
  return u;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw ParseError("unknown field '" + key + "' in " + where);
}

std::vector<int> qubits_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("'qubits' must be an array");
  std::vector<int> out;
  for (const auto& q : j) {
    if (!q.is_number_integer()) throw ParseError("'qubits' entries must be integers");
    out.push_back(q.get<int>());
  }
  return out;
}

const json& params_of(const json& j) {
  static const json empty = json::object();
  if (!j.contains("params")) return empty;
  if (!j.at("params").is_object()) throw ParseError("'params' must be an object");
  return j.at("params");
}

}  // namespace

json gate_to_json(const Gate& g) {
  json out;
  out["kind"] = gate_kind_name(g);
  json qubits = json::array();
  for (int q : gate_support(g)) qubits.push_back(q);
  out["qubits"] = std::move(qubits);
  json params = json::object();
  if (const auto* o = std::get_if<OneQubitGate>(&g)) {
    params["unitary"] = mat2_to_json(o->u);
  } else if (const auto* c = std::get_if<ControlledUGate>(&g)) {
    params["unitary"] = mat2_to_json(c->u);
  } else if (const auto* s = std::get_if<SymmetricPhaseGate>(&g)) {
    params["theta"] = s->theta;
  } else if (const auto* d = std::get_if<DiagonalGate>(&g)) {
    params["phases"] = d->phases;
  }
  out["params"] = std::move(params);
  return out;
}

Gate gate_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("gate record must be an object");
  reject_unknown_keys(j, {"kind", "qubits", "params"}, "gate record");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("gate record needs a string 'kind'");
  if (!j.contains("qubits")) throw ParseError("gate record needs 'qubits'");
  const std::string kind = j.at("kind").get<std::string>();
  const auto qubits = qubits_from_json(j.at("qubits"));
  const json& params = params_of(j);

  if (kind == "cnot") {
    reject_unknown_keys(params, {}, "cnot params");
    if (qubits.size() != 2) throw ParseError("cnot needs exactly 2 qubits");
    return CnotGate{qubits[0], qubits[1]};
  }
  if (kind == "one_qubit") {
    reject_unknown_keys(params, {"unitary"}, "one_qubit params");
    if (qubits.size() != 1) throw ParseError("one_qubit needs exactly 1 qubit");
    if (!params.contains("unitary")) throw ParseError("one_qubit needs 'unitary'");
    return OneQubitGate{qubits[0], mat2_from_json(params.at("unitary"))};
  }
  if (kind == "controlled_u") {
    reject_unknown_keys(params, {"unitary"}, "controlled_u params");
    if (qubits.size() != 2) throw ParseError("controlled_u needs exactly 2 qubits");
    if (!params.contains("unitary")) throw ParseError("controlled_u needs 'unitary'");
    return ControlledUGate{qubits[0], qubits[1], mat2_from_json(params.at("unitary"))};
  }
  if (kind == "symmetric_phase") {
    reject_unknown_keys(params, {"theta"}, "symmetric_phase params");
    if (qubits.size() != 2) throw ParseError("symmetric_phase needs exactly 2 qubits");
    if (!params.contains("theta") || !params.at("theta").is_number())
      throw ParseError("symmetric_phase needs a numeric 'theta'");
    return SymmetricPhaseGate{qubits[0], qubits[1], params.at("theta").get<double>()};
  }
  if (kind == "diagonal") {
    reject_unknown_keys(params, {"phases"}, "diagonal params");
    if (!params.contains("phases") || !params.at("phases").is_array())
      throw ParseError("diagonal needs a 'phases' array");
    std::vector<double> phases;
    for (const auto& p : params.at("phases")) {
      if (!p.is_number()) throw ParseError("'phases' entries must be numbers");
      phases.push_back(p.get<double>());
    }
    return DiagonalGate{qubits, std::move(phases)};
  }
  throw ParseError("unknown gate kind '" + kind + "'");
}

namespace {

json header_json(int width_data, int width_ancilla, double global_phase) {
  json out;
  out["format_version"] = "1";
  out["width_data"] = width_data;
  out["width_ancilla"] = width_ancilla;
  out["global_phase"] = global_phase;
  return out;
}

}  // namespace

json circuit_to_json(const Circuit& c) {
  json out = header_json(c.width_data, c.width_ancilla, c.global_phase);
  json gates = json::array();
  for (const Gate& g : c.gates) gates.push_back(gate_to_json(g));
  out["gates"] = std::move(gates);
  return out;
}

json circuit_to_json(const LayeredCircuit& c) {
  json out = header_json(c.width_data, c.width_ancilla, c.global_phase);
  json layers = json::array();
  for (const auto& layer : c.layers) {
    json jl = json::array();
    for (const Gate& g : layer) jl.push_back(gate_to_json(g));
    layers.push_back(std::move(jl));
  }
  out["layers"] = std::move(layers);
  return out;
}

Circuit CircuitDocument::as_circuit() const {
  if (flat) return *flat;
  return flatten(*layered);
}

CircuitDocument parse_circuit_document(const json& j) {
  if (!j.is_object()) throw ParseError("circuit document must be an object");
  reject_unknown_keys(
      j, {"format_version", "width_data", "width_ancilla", "global_phase", "gates", "layers"},
      "circuit document");
  if (!j.contains("format_version") || j.at("format_version") != "1")
    throw ParseError("missing or unsupported format_version (expected \"1\")");
  for (const char* key : {"width_data", "width_ancilla"})
    if (!j.contains(key) || !j.at(key).is_number_integer())
      throw ParseError(std::string("missing integer field '") + key + "'");
  if (j.contains("gates") == j.contains("layers"))
    throw ParseError("document must carry exactly one of 'gates' or 'layers'");

  const int width_data = j.at("width_data").get<int>();
  const int width_ancilla = j.at("width_ancilla").get<int>();
  double global_phase = 0.0;
  if (j.contains("global_phase")) {
    if (!j.at("global_phase").is_number())
      throw ParseError("'global_phase' must be a number");
    global_phase = j.at("global_phase").get<double>();
  }

  CircuitDocument doc;
  std::vector<Violation> violations;
  if (j.contains("gates")) {
    if (!j.at("gates").is_array()) throw ParseError("'gates' must be an array");
    Circuit c;
    c.width_data = width_data;
    c.width_ancilla = width_ancilla;
    c.global_phase = global_phase;
    for (const auto& jg : j.at("gates")) c.gates.push_back(gate_from_json(jg));
    violations = validate(c);
    doc.flat = std::move(c);
  } else {
    if (!j.at("layers").is_array()) throw ParseError("'layers' must be an array");
    LayeredCircuit c;
    c.width_data = width_data;
    c.width_ancilla = width_ancilla;
    c.global_phase = global_phase;
    for (const auto& jl : j.at("layers")) {
      if (!jl.is_array()) throw ParseError("each layer must be an array");
      std::vector<Gate> layer;
      for (const auto& jg : jl) layer.push_back(gate_from_json(jg));
      c.layers.push_back(std::move(layer));
    }
    violations = validate(c);
    doc.layered = std::move(c);
  }
  if (!violations.empty())
    throw ParseError("circuit fails validation: " + violations.front().message);
  return doc;
}

CircuitDocument load_circuit_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_circuit_document(j);
}

namespace {

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace

void save_circuit_file(const std::filesystem::path& path, const Circuit& c) {
  write_json(path, circuit_to_json(c));
}

void save_circuit_file(const std::filesystem::path& path, const LayeredCircuit& c) {
  write_json(path, circuit_to_json(c));
}

}  // namespace qpar
